#pragma once

#include "bic/cone_surface.hpp"
#include "bic/conformal.hpp"
#include "bic/convergence.hpp"
#include "bic/measure.hpp"

#include <string>
#include <vector>

namespace bic {

struct ReferenceValue;

inline constexpr const char* kToolVersion = "0.1.0";

// --- JSON file formats -------------------------------------------------------------
// mesh:    { "vertices": n, "faces": [[i,j,k],...],
//            "edge_lengths": [["i-j", L], ...], "positions": [[x,y,z],...]? }
// measure: { "carrier": "plane"|"sphere"|"torus", "domain": {...}?,
//            "atoms": [{"point": [x,y(,z)], "mass": m}, ...],
//            "curves": [{"polyline": [[..],..], "density": {"kind": ...}}, ...],
//            "ac": null | {...}, "quadrature_order": n? }
// metric:  { "background": ..., "domain": {...}?, "potential": {"kind": ...},
//            "scale": r, "potential_shift": c?, "atoms": [...]?, "fd_grid": {...}? }

std::string mesh_to_json(const ConeSurface& s);
ConeSurface mesh_from_json(const std::string& text);

std::string measure_to_json(const SignedMeasure& mu);
SignedMeasure measure_from_json(const std::string& text);

std::string metric_to_json(const ConformalMetric& m);
ConformalMetric metric_from_json(const std::string& text);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// --- CSV reports ---------------------------------------------------------------------
// Every file begins with a header line carrying the tool version, the command
// line and the seed, so identical runs produce identical bytes.

std::string csv_header(const std::string& command_line, uint64_t seed);

struct DistanceRow {
  int p, q, level;
  double distance;
  std::string status;  // "ok" or an error class
};
std::string distance_table_csv(const std::vector<DistanceRow>& rows,
                               const std::string& command_line, uint64_t seed);

std::string icosphere_report_csv(const std::vector<IcosphereRow>& rows,
                                 const std::string& command_line, uint64_t seed);
std::string mollification_report_csv(const std::vector<MollificationRow>& rows,
                                     const std::string& command_line, uint64_t seed);
std::string lantern_report_csv(const std::vector<LanternRow>& rows,
                               const std::string& command_line, uint64_t seed);

// Reference values of a gallery item.
std::string references_csv(const std::vector<ReferenceValue>& refs,
                           const std::string& command_line, uint64_t seed);

}  // namespace bic
