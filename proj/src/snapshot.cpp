#include "gkdv/snapshot.hpp"

#include <fstream>

#include <json.hpp>

namespace gkdv {

namespace {

std::string strip_suffix(const std::string& path) {
  for (const char* suf : {".f64", ".json"}) {
    const std::string s(suf);
    if (path.size() > s.size() && path.compare(path.size() - s.size(), s.size(), s) == 0)
      return path.substr(0, path.size() - s.size());
  }
  return path;
}

}  // namespace

void write_snapshot(const std::string& base, const Field& f, double time, int k) {
  const std::string stem = strip_suffix(base);
  {
    std::ofstream bin(stem + ".f64", std::ios::binary);
    if (!bin) throw Error("write_snapshot: cannot open " + stem + ".f64");
    bin.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  }
  nlohmann::json meta{{"n_points", f.grid.n()},
                      {"length", f.grid.length()},
                      {"time", time},
                      {"k", k}};
  std::ofstream side(stem + ".json");
  if (!side) throw Error("write_snapshot: cannot open " + stem + ".json");
  side << meta.dump(2) << "\n";
}

std::pair<Field, SnapshotMeta> read_snapshot(const std::string& base) {
  const std::string stem = strip_suffix(base);
  std::ifstream side(stem + ".json");
  if (!side) throw Error("read_snapshot: cannot open " + stem + ".json");
  nlohmann::json meta = nlohmann::json::parse(side);
  SnapshotMeta m;
  m.n_points = meta.at("n_points").get<int>();
  m.length = meta.at("length").get<double>();
  m.time = meta.at("time").get<double>();
  m.k = meta.at("k").get<int>();

  Field f(Grid1D(m.n_points, m.length));
  std::ifstream bin(stem + ".f64", std::ios::binary);
  if (!bin) throw Error("read_snapshot: cannot open " + stem + ".f64");
  bin.read(reinterpret_cast<char*>(f.values.data()),
           static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (bin.gcount() != static_cast<std::streamsize>(f.values.size() * sizeof(double)))
    throw Error("read_snapshot: " + stem + ".f64 is shorter than the sidecar declares");
  return {std::move(f), m};
}

}  // namespace gkdv
