#ifndef MSP_SADDLE_MANIFEST_HPP
#define MSP_SADDLE_MANIFEST_HPP

#include "msp/core/errors.hpp"
#include "msp/linalg/matrix_market.hpp"
#include "msp/saddle/block_system.hpp"
#include "msp/saddle/schur_chain.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

// On-disk block system: a JSON manifest next to Matrix Market files.
//
//   {
//     "schema_version": 1,
//     "N": 2,
//     "sizes": [n0, n1, n2],
//     "diag_blocks": ["A0.mtx", "A1.mtx", "A2.mtx"],
//     "offdiag_blocks": ["B1.mtx", "B2.mtx"],
//     "approx_blocks": ["S0.mtx", "S1.mtx", "S2.mtx"]     (optional)
//   }
//
// Relative paths resolve against the manifest's directory.

namespace msp {

struct LoadedSystem
{
  BlockTridiagonalSystem system;
  std::optional<std::vector<SymMatrix>> approx_blocks;
};

inline LoadedSystem load_manifest(const std::string& path, Validation validation = Validation::on)
{
  namespace fs = std::filesystem;
  std::ifstream in(path);
  if (!in)
    throw IoError(path + ": cannot open manifest");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  const fs::path base = fs::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    fs::path fp(p);
    return (fp.is_absolute() ? fp : base / fp).string();
  };

  try {
    if (j.at("schema_version").get<int>() != 1)
      throw IoError(path + ": unsupported schema_version");
    const auto n = j.at("N").get<Index>();
    const auto sizes = j.at("sizes").get<std::vector<Index>>();
    const auto diag = j.at("diag_blocks").get<std::vector<std::string>>();
    const auto off = j.at("offdiag_blocks").get<std::vector<std::string>>();
    if (static_cast<Index>(sizes.size()) != n + 1 || static_cast<Index>(diag.size()) != n + 1 ||
        static_cast<Index>(off.size()) != n)
      throw ShapeMismatch(path + ": N, sizes and block lists disagree");

    std::vector<SparseMatrix> a, b;
    for (Index k = 0; k <= n; ++k) {
      a.push_back(mm::read_sparse(resolve(diag[k])));
      if (a.back().rows() != sizes[k])
        throw ShapeMismatch(path + ": A_" + std::to_string(k) + " does not match sizes[" + std::to_string(k) + "]");
    }
    for (Index k = 0; k < n; ++k)
      b.push_back(mm::read_sparse(resolve(off[k])));

    LoadedSystem out{BlockTridiagonalSystem(std::move(a), std::move(b), validation), std::nullopt};
    if (j.contains("approx_blocks")) {
      const auto ap = j.at("approx_blocks").get<std::vector<std::string>>();
      if (static_cast<Index>(ap.size()) != n + 1)
        throw ShapeMismatch(path + ": approx_blocks must list N+1 files");
      std::vector<SymMatrix> s;
      for (const auto& p : ap)
        s.push_back(mm::read_sym(resolve(p)));
      out.approx_blocks = std::move(s);
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
}

/// Writes the blocks as A<k>.mtx, B<k>.mtx (and S<k>.mtx) plus
/// manifest.json into `dir`; returns the manifest path.
inline std::string write_manifest(const std::string& dir, const BlockTridiagonalSystem& sys,
                                  const std::vector<SymMatrix>* approx = nullptr)
{
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["N"] = sys.N();
  j["sizes"] = sys.sizes();
  std::vector<std::string> d, o, s;
  for (Index k = 0; k <= sys.N(); ++k) {
    d.push_back("A" + std::to_string(k) + ".mtx");
    mm::write((fs::path(dir) / d.back()).string(), sys.A(k));
    if (k >= 1) {
      o.push_back("B" + std::to_string(k) + ".mtx");
      mm::write((fs::path(dir) / o.back()).string(), sys.B(k));
    }
    if (approx) {
      s.push_back("S" + std::to_string(k) + ".mtx");
      mm::write((fs::path(dir) / s.back()).string(), approx->at(k));
    }
  }
  j["diag_blocks"] = d;
  j["offdiag_blocks"] = o;
  if (approx)
    j["approx_blocks"] = s;
  const std::string path = (fs::path(dir) / "manifest.json").string();
  std::ofstream out(path);
  if (!out)
    throw IoError(path + ": cannot open for writing");
  out << j.dump(2) << '\n';
  return path;
}

} // namespace msp

#endif
