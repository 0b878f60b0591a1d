#include "evograph/storage.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <vector>

#include <openssl/evp.h>

#include "evograph/error.hpp"
#include "evograph/text.hpp"

namespace evograph {

namespace fs = std::filesystem;

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1)
      throw IoError("failed to initialize SHA-256");
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(std::string_view data) {
    if (EVP_DigestUpdate(ctx_, data.data(), data.size()) != 1)
      throw IoError("SHA-256 update failed");
  }

  std::string hex() {
    unsigned char out[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_, out, &len) != 1) throw IoError("SHA-256 finalize failed");
    static const char* kHex = "0123456789abcdef";
    std::string s;
    s.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
      s.push_back(kHex[out[i] >> 4]);
      s.push_back(kHex[out[i] & 0xf]);
    }
    return s;
  }

 private:
  EVP_MD_CTX* ctx_;
};

// Buffered writer that digests exactly the bytes written.
class TableWriter {
 public:
  explicit TableWriter(const fs::path& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot open " + path.string() + " for writing");
    buf_.reserve(1 << 20);
  }

  void row(const std::string& line) {
    buf_ += line;
    buf_ += '\n';
    ++rows_;
    if (buf_.size() >= (1 << 20)) flush();
  }

  FileDigest finish() {
    flush();
    out_.flush();
    if (!out_) throw IoError("write failure on " + path_.string());
    return {sha_.hex(), rows_};
  }

 private:
  void flush() {
    if (buf_.empty()) return;
    sha_.update(buf_);
    out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    buf_.clear();
  }

  fs::path path_;
  std::ofstream out_;
  std::string buf_;
  Sha256 sha_;
  std::uint64_t rows_ = 0;
};

std::string edge_file_name(std::size_t partition) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "edges-%04zu.tsv", partition);
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading " + path.string());
  return data;
}

std::string sha256_of(std::string_view data) {
  Sha256 sha;
  sha.update(data);
  return sha.hex();
}

std::string render_validity(const IntervalSet& validity) {
  std::string s;
  for (const Interval& iv : validity.intervals()) {
    if (!s.empty()) s += ';';
    s += std::to_string(iv.start);
    s += ',';
    s += std::to_string(iv.end);
  }
  return s;
}

nlohmann::json window_to_json(const WindowSpec& w) {
  nlohmann::json j;
  if (w.kind == WindowSpec::Kind::CalendarMonth) {
    j["kind"] = "calendar_month";
  } else {
    j["kind"] = "fixed_duration";
    j["duration_seconds"] = w.duration_seconds;
    j["origin"] = format_time(w.origin);
  }
  return j;
}

WindowSpec window_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "calendar_month") return WindowSpec::calendar_month();
  if (kind != "fixed_duration") throw DataError("manifest: unknown window kind '" + kind + "'");
  const auto origin = parse_time(j.at("origin").get<std::string>());
  if (!origin) throw DataError("manifest: bad window origin timestamp");
  return WindowSpec::fixed(j.at("duration_seconds").get<std::int64_t>(), *origin);
}

TimeInstant time_from_json(const nlohmann::json& j, const char* what) {
  const auto t = parse_time(j.get<std::string>());
  if (!t) throw DataError(std::string("manifest: bad timestamp for ") + what);
  return *t;
}

std::int64_t field_int(const std::vector<std::string_view>& fields, std::size_t idx,
                       const std::string& file, std::uint64_t row) {
  const auto v = parse_int(fields[idx]);
  if (!v)
    throw DataError(file + " row " + std::to_string(row) + ": field " + std::to_string(idx + 1) +
                    " is not an integer");
  return *v;
}

}  // namespace

nlohmann::json GraphManifest::to_json() const {
  nlohmann::json j;
  j["format_version"] = format_version;
  j["resolution_digits"] = resolution_digits;
  j["time_span"] = {{"start", format_time(time_span.start)}, {"end", format_time(time_span.end)}};
  j["vertex_count"] = vertex_count;
  j["edge_count"] = edge_count;
  j["partition_count"] = partition_count;
  nlohmann::json jfiles;
  for (const auto& [name, d] : files)
    jfiles[name] = {{"sha256", d.sha256_hex}, {"rows", d.rows}};
  j["files"] = jfiles;
  if (window_applied) j["window_applied"] = window_to_json(*window_applied);
  if (!extra.is_null()) j["extra"] = extra;
  return j;
}

GraphManifest GraphManifest::from_json(const nlohmann::json& j) {
  GraphManifest m;
  m.format_version = j.at("format_version").get<int>();
  m.resolution_digits = j.at("resolution_digits").get<int>();
  m.time_span = {time_from_json(j.at("time_span").at("start"), "time_span.start"),
                 time_from_json(j.at("time_span").at("end"), "time_span.end")};
  m.vertex_count = j.at("vertex_count").get<std::uint64_t>();
  m.edge_count = j.at("edge_count").get<std::uint64_t>();
  m.partition_count = j.at("partition_count").get<std::size_t>();
  for (const auto& [name, jd] : j.at("files").items())
    m.files[name] = {jd.at("sha256").get<std::string>(), jd.at("rows").get<std::uint64_t>()};
  if (j.contains("window_applied")) m.window_applied = window_from_json(j.at("window_applied"));
  if (j.contains("extra")) m.extra = j.at("extra");
  return m;
}

GraphManifest save(const EvolvingGraph& g, const fs::path& dir, const nlohmann::json& extra) {
  std::error_code ec;
  if (fs::exists(dir)) {
    const fs::path mpath = dir / "manifest.json";
    if (fs::exists(mpath)) {
      nlohmann::json j;
      try {
        std::ifstream in(mpath);
        in >> j;
      } catch (const std::exception& e) {
        throw DataError("refusing to overwrite " + dir.string() +
                        ": existing manifest is unreadable (" + e.what() + ")");
      }
      const int existing = j.value("format_version", -1);
      if (existing != kFormatVersion)
        throw DataError("refusing to overwrite " + dir.string() + ": format_version " +
                        std::to_string(existing) + " differs from " +
                        std::to_string(kFormatVersion));
    }
  } else if (!fs::create_directories(dir, ec) && ec) {
    throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  }

  GraphManifest man;
  man.resolution_digits = g.meta().resolution_digits;
  man.time_span = g.meta().time_span;
  man.vertex_count = g.meta().vertex_count;
  man.edge_count = g.meta().edge_count;
  man.partition_count = g.meta().partition_count;
  man.window_applied = g.meta().window_applied;
  man.extra = extra;

  {
    TableWriter w(dir / "vertices.tsv");
    std::string line;
    for (const VertexRecord& v : g.vertices()) {
      line.clear();
      line += std::to_string(v.vid);
      line += '\t';
      line += std::to_string(v.cell.lat_micro);
      line += '\t';
      line += std::to_string(v.cell.lon_micro);
      line += '\t';
      line += render_validity(v.validity);
      w.row(line);
    }
    man.files["vertices.tsv"] = w.finish();
  }
  for (std::size_t pi = 0; pi < g.partitions().size(); ++pi) {
    TableWriter w(dir / edge_file_name(pi));
    std::string line;
    for (const EdgeRecord& e : g.partitions()[pi]) {
      line.clear();
      line += std::to_string(e.eid);
      line += '\t';
      line += std::to_string(e.src);
      line += '\t';
      line += std::to_string(e.dst);
      line += '\t';
      line += std::to_string(e.validity.start);
      line += '\t';
      line += std::to_string(e.validity.end);
      line += '\t';
      line += std::to_string(e.passengers);
      line += '\t';
      line += std::to_string(e.fare_cents);
      line += '\t';
      line += std::to_string(e.duration_seconds);
      w.row(line);
    }
    man.files[edge_file_name(pi)] = w.finish();
  }

  std::ofstream mout(dir / "manifest.json", std::ios::binary);
  if (!mout) throw IoError("cannot write " + (dir / "manifest.json").string());
  mout << man.to_json().dump(2) << '\n';
  mout.flush();
  if (!mout) throw IoError("write failure on " + (dir / "manifest.json").string());
  return man;
}

EvolvingGraph load(const fs::path& dir, GraphManifest* manifest_out) {
  const fs::path mpath = dir / "manifest.json";
  if (!fs::exists(mpath)) throw IoError("no manifest.json in " + dir.string());
  nlohmann::json j;
  try {
    std::ifstream in(mpath);
    if (!in) throw IoError("cannot open " + mpath.string());
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad manifest JSON in " + mpath.string() + ": " + e.what());
  }
  GraphManifest man;
  try {
    man = GraphManifest::from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad manifest in " + mpath.string() + ": " + e.what());
  }
  if (man.format_version != kFormatVersion)
    throw DataError(dir.string() + ": unsupported format_version " +
                    std::to_string(man.format_version));
  if (man.partition_count < 1) throw DataError("manifest: partition_count must be >= 1");

  auto load_table = [&](const std::string& name) {
    const fs::path path = dir / name;
    if (!fs::exists(path)) throw IoError("missing file " + path.string());
    const auto digest_it = man.files.find(name);
    if (digest_it == man.files.end())
      throw DataError("manifest does not list file " + name);
    std::string data = read_file(path);
    if (sha256_of(data) != digest_it->second.sha256_hex)
      throw DataError("digest mismatch in " + name + "; file is corrupt or was modified");
    return data;
  };

  std::vector<VertexRecord> verts;
  {
    const std::string name = "vertices.tsv";
    const std::string data = load_table(name);
    verts.reserve(man.vertex_count);
    std::vector<std::string_view> fields;
    std::string scratch;
    std::uint64_t row = 0;
    std::size_t start = 0;
    while (start < data.size()) {
      std::size_t nl = data.find('\n', start);
      if (nl == std::string::npos) nl = data.size();
      const std::string_view line(data.data() + start, nl - start);
      start = nl + 1;
      if (line.empty()) continue;
      ++row;
      split_csv_line(line, '\t', fields, scratch);
      if (fields.size() != 4)
        throw DataError(name + " row " + std::to_string(row) + ": expected 4 columns");
      VertexRecord v;
      v.vid = static_cast<VertexId>(field_int(fields, 0, name, row));
      v.cell.lat_micro = field_int(fields, 1, name, row);
      v.cell.lon_micro = field_int(fields, 2, name, row);
      v.cell.resolution_digits = man.resolution_digits;
      std::vector<Interval> ivs;
      std::string_view rest = fields[3];
      while (!rest.empty()) {
        const std::size_t semi = rest.find(';');
        const std::string_view pair = rest.substr(0, semi);
        rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
        const std::size_t comma = pair.find(',');
        if (comma == std::string_view::npos)
          throw DataError(name + " row " + std::to_string(row) + ": bad validity pair");
        const auto s = parse_int(pair.substr(0, comma));
        const auto e = parse_int(pair.substr(comma + 1));
        if (!s || !e || *s >= *e)
          throw DataError(name + " row " + std::to_string(row) + ": bad validity interval");
        ivs.push_back({*s, *e});
      }
      if (ivs.empty())
        throw DataError(name + " row " + std::to_string(row) + ": empty validity");
      v.validity = IntervalSet::from_intervals(std::move(ivs));
      verts.push_back(std::move(v));
    }
    if (row != man.files.at(name).rows)
      throw DataError(name + ": row count " + std::to_string(row) + " does not match manifest");
  }
  if (verts.size() != man.vertex_count)
    throw DataError("vertex count " + std::to_string(verts.size()) + " does not match manifest " +
                    std::to_string(man.vertex_count));

  std::vector<EdgeRecord> edges;
  edges.reserve(man.edge_count);
  for (std::size_t pi = 0; pi < man.partition_count; ++pi) {
    const std::string name = edge_file_name(pi);
    const std::string data = load_table(name);
    std::vector<std::string_view> fields;
    std::string scratch;
    std::uint64_t row = 0;
    std::size_t start = 0;
    while (start < data.size()) {
      std::size_t nl = data.find('\n', start);
      if (nl == std::string::npos) nl = data.size();
      const std::string_view line(data.data() + start, nl - start);
      start = nl + 1;
      if (line.empty()) continue;
      ++row;
      split_csv_line(line, '\t', fields, scratch);
      if (fields.size() != 8)
        throw DataError(name + " row " + std::to_string(row) + ": expected 8 columns");
      EdgeRecord e;
      e.eid = static_cast<EdgeId>(field_int(fields, 0, name, row));
      e.src = static_cast<VertexId>(field_int(fields, 1, name, row));
      e.dst = static_cast<VertexId>(field_int(fields, 2, name, row));
      const TimeInstant s = field_int(fields, 3, name, row);
      const TimeInstant en = field_int(fields, 4, name, row);
      if (s >= en) throw DataError(name + " row " + std::to_string(row) + ": empty validity");
      e.validity = {s, en};
      e.passengers = field_int(fields, 5, name, row);
      e.fare_cents = field_int(fields, 6, name, row);
      e.duration_seconds = field_int(fields, 7, name, row);
      edges.push_back(e);
    }
    if (row != man.files.at(name).rows)
      throw DataError(name + ": row count " + std::to_string(row) + " does not match manifest");
  }
  if (edges.size() != man.edge_count)
    throw DataError("edge count " + std::to_string(edges.size()) + " does not match manifest " +
                    std::to_string(man.edge_count));

  EvolvingGraph g = EvolvingGraph::build(std::move(verts), std::move(edges),
                                         man.resolution_digits, man.window_applied,
                                         man.partition_count, man.time_span);
  if (g.meta().time_span != man.time_span)
    throw DataError("manifest time_span does not match the stored entities");
  const ValidationReport rep = validate(g);
  if (!rep.ok()) {
    std::string msg = dir.string() + ": loaded graph violates invariants:";
    for (std::size_t i = 0; i < rep.violations.size() && i < 5; ++i)
      msg += "\n  " + rep.violations[i];
    if (rep.violations.size() > 5)
      msg += "\n  ... and " + std::to_string(rep.violations.size() - 5) + " more";
    throw DataError(msg);
  }
  if (manifest_out) *manifest_out = man;
  return g;
}

}  // namespace evograph
