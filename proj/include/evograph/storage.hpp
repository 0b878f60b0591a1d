#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "evograph/graph.hpp"

namespace evograph {

inline constexpr int kFormatVersion = 1;

struct FileDigest {
  std::string sha256_hex;
  std::uint64_t rows = 0;

  friend bool operator==(const FileDigest&, const FileDigest&) = default;
};

struct GraphManifest {
  int format_version = kFormatVersion;
  int resolution_digits = 4;
  Interval time_span{0, 1};
  std::uint64_t vertex_count = 0;
  std::uint64_t edge_count = 0;
  std::size_t partition_count = 1;
  std::map<std::string, FileDigest> files;
  std::optional<WindowSpec> window_applied;
  nlohmann::json extra;  // e.g. the cleaning report echo

  nlohmann::json to_json() const;
  static GraphManifest from_json(const nlohmann::json& j);
};

// Directory layout: manifest.json (written last, the commit point),
// vertices.tsv, and partition_count edges-NNNN.tsv files. All tables are
// tab-delimited with fixed column orders; equal graphs serialize to
// byte-identical files. Refuses to overwrite a directory holding a different
// format_version.
GraphManifest save(const EvolvingGraph& g, const std::filesystem::path& dir,
                   const nlohmann::json& extra = nlohmann::json());

// Verifies digests, row counts and graph invariants; errors name the file
// and row. Loaded graphs always pass validate().
EvolvingGraph load(const std::filesystem::path& dir, GraphManifest* manifest_out = nullptr);

}  // namespace evograph
