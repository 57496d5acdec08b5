#pragma once

#include "gmps/lattice.hpp"
#include "gmps/parent_hamiltonian.hpp"
#include "gmps/spectral.hpp"

#include <json.hpp>

#include <filesystem>

namespace gmps {

using json = nlohmann::json;

/// JSON syntax error with position information for CLI diagnostics.
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(what), line(line), column(column) {}
  int line = 0;
  int column = 0;
};

/// Parses a file, translating nlohmann byte offsets into line/column.
json parse_json_file(const std::filesystem::path& path);

json to_json(const CovMat& g);
CovMat covmat_from_json(const json& j);

json to_json(const GaussChannel& ch);
GaussChannel channel_from_json(const json& j);

json to_json(const GmpsSpec& spec);
GmpsSpec spec_from_json(const json& j);

json to_json(const RationalCM& rc);
RationalCM rational_from_json(const json& j);

json to_json(const QuadHamiltonian& h);
QuadHamiltonian hamiltonian_from_json(const json& j);

void write_json_file(const std::filesystem::path& path, const json& j);

/// Correlation table: `# key=value` metadata lines, then a header row and
/// one row per distance, 17 significant digits.
std::string correlations_csv(const std::vector<int>& n, const std::vector<double>& gamma_q,
                             const std::vector<double>& gamma_p,
                             const std::vector<double>& gamma_r,
                             const std::vector<std::pair<std::string, std::string>>& metadata);

std::string format_double(double v);  // %.17g

}  // namespace gmps
