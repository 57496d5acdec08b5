#include "gmps/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gmps {

namespace {

void check_keys(const json& j, const std::vector<std::string>& allowed,
                const std::string& what) {
  if (!j.is_object()) throw std::invalid_argument(what + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw std::invalid_argument(what + ": unknown key \"" + key + "\"");
  }
}

void require_keys(const json& j, const std::vector<std::string>& required,
                  const std::string& what) {
  for (const auto& key : required)
    if (!j.contains(key)) throw std::invalid_argument(what + ": missing key \"" + key + "\"");
}

std::vector<double> coeff_list(const json& j, const std::string& what) {
  if (!j.is_array()) throw std::invalid_argument(what + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(v.get<double>());
  return out;
}

json padded_coeffs(const Poly& p, int length) {
  json arr = json::array();
  for (int k = 0; k < length; ++k)
    arr.push_back(k <= p.degree() ? p.coeffs()[static_cast<size_t>(k)] : 0.0);
  return arr;
}

}  // namespace

json parse_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1, col = 1;
    const size_t stop = std::min(e.byte, text.size());
    for (size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(path.string() + ": " + e.what(), line, col);
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

json to_json(const CovMat& g) {
  json entries = json::array();
  for (int i = 0; i < g.dim(); ++i)
    for (int k = 0; k < g.dim(); ++k) entries.push_back(g.entries(i, k));
  return json{{"n_modes", g.n_modes}, {"ordering", to_string(g.ordering)}, {"entries", entries}};
}

CovMat covmat_from_json(const json& j) {
  check_keys(j, {"n_modes", "ordering", "entries"}, "CovMat");
  require_keys(j, {"n_modes", "ordering", "entries"}, "CovMat");
  const int n = j.at("n_modes").get<int>();
  if (n < 1) throw std::invalid_argument("CovMat: n_modes must be >= 1");
  const std::string ord = j.at("ordering").get<std::string>();
  Ordering ordering;
  if (ord == "interleaved")
    ordering = Ordering::Interleaved;
  else if (ord == "blocked")
    ordering = Ordering::Blocked;
  else
    throw std::invalid_argument("CovMat: ordering must be \"interleaved\" or \"blocked\"");
  const auto flat = coeff_list(j.at("entries"), "CovMat.entries");
  const int d = 2 * n;
  if (static_cast<int>(flat.size()) != d * d)
    throw std::invalid_argument("CovMat: entries must hold 2n*2n values");
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) m(i, k) = flat[static_cast<size_t>(i * d + k)];
  return CovMat::from_entries(std::move(m), ordering);
}

json to_json(const GaussChannel& ch) {
  return json{{"n_in", ch.n_in},
              {"n_out", ch.n_out},
              {"cm", to_json(ch.cm)},
              {"pure", ch.pure},
              {"regularized", ch.regularized}};
}

GaussChannel channel_from_json(const json& j) {
  check_keys(j, {"n_in", "n_out", "cm", "pure", "regularized"}, "GaussChannel");
  require_keys(j, {"n_in", "n_out", "cm"}, "GaussChannel");
  GaussChannel ch;
  ch.n_in = j.at("n_in").get<int>();
  ch.n_out = j.at("n_out").get<int>();
  ch.cm = covmat_from_json(j.at("cm"));
  ch.pure = j.value("pure", false);
  ch.regularized = j.value("regularized", false);
  if (ch.n_in < 0 || ch.n_out < 1 || ch.cm.n_modes != ch.n_in + ch.n_out)
    throw std::invalid_argument("GaussChannel: CM size does not match n_in + n_out");
  return ch;
}

json to_json(const GmpsSpec& spec) {
  json j{{"M", spec.bonds}, {"boundary", to_string(spec.boundary)}};
  if (spec.translation_invariant()) {
    j["sites"] = json{{"uniform", to_json(spec.sites.front())}, {"N", spec.n_sites()}};
  } else {
    json arr = json::array();
    for (const auto& s : spec.sites) arr.push_back(to_json(s));
    j["sites"] = arr;
  }
  if (spec.bond_squeezings) j["bond_squeezings"] = *spec.bond_squeezings;
  return j;
}

GmpsSpec spec_from_json(const json& j) {
  check_keys(j, {"M", "boundary", "sites", "bond_squeezings"}, "GmpsSpec");
  require_keys(j, {"M", "boundary", "sites"}, "GmpsSpec");
  GmpsSpec spec;
  spec.bonds = j.at("M").get<int>();
  const std::string b = j.at("boundary").get<std::string>();
  if (b == "periodic")
    spec.boundary = Boundary::Periodic;
  else if (b == "open")
    spec.boundary = Boundary::Open;
  else
    throw std::invalid_argument("GmpsSpec: boundary must be \"periodic\" or \"open\"");
  const json& sites = j.at("sites");
  if (sites.is_array()) {
    for (const auto& s : sites) spec.sites.push_back(channel_from_json(s));
  } else {
    check_keys(sites, {"uniform", "N"}, "GmpsSpec.sites");
    require_keys(sites, {"uniform", "N"}, "GmpsSpec.sites");
    const GaussChannel site = channel_from_json(sites.at("uniform"));
    const int n = sites.at("N").get<int>();
    spec.sites.assign(static_cast<size_t>(n), site);
  }
  if (j.contains("bond_squeezings"))
    spec.bond_squeezings = j.at("bond_squeezings").get<std::vector<double>>();
  spec.validate();
  return spec;
}

json to_json(const RationalCM& rc) {
  const int len = rc.degree_bound + 1;
  return json{{"L", rc.degree_bound}, {"p", padded_coeffs(rc.p, len)},
              {"q", padded_coeffs(rc.q, len)}, {"r", padded_coeffs(rc.r, len)},
              {"d", padded_coeffs(rc.d, len)}, {"normalization", "d(1)=1"}};
}

RationalCM rational_from_json(const json& j) {
  check_keys(j, {"L", "p", "q", "r", "d", "normalization"}, "RationalCM");
  require_keys(j, {"L", "p", "q", "r", "d"}, "RationalCM");
  if (j.value("normalization", "d(1)=1") != std::string("d(1)=1"))
    throw std::invalid_argument("RationalCM: unsupported normalization");
  return RationalCM::from_polys(Poly(coeff_list(j.at("p"), "RationalCM.p")),
                                Poly(coeff_list(j.at("q"), "RationalCM.q")),
                                Poly(coeff_list(j.at("r"), "RationalCM.r")),
                                Poly(coeff_list(j.at("d"), "RationalCM.d")));
}

json to_json(const QuadHamiltonian& h) {
  const int len = h.range + 1;
  json couplings = json::array();
  for (const auto& blk : h.couplings) {
    couplings.push_back(json::array({json::array({blk(0, 0), blk(0, 1)}),
                                     json::array({blk(1, 0), blk(1, 1)})}));
  }
  return json{{"p", padded_coeffs(h.h_q, len)},   {"q", padded_coeffs(h.h_p, len)},
              {"r", padded_coeffs(h.h_qp * -1.0, len)}, {"range", h.range},
              {"couplings", couplings}};
}

QuadHamiltonian hamiltonian_from_json(const json& j) {
  check_keys(j, {"p", "q", "r", "range", "couplings"}, "QuadHamiltonian");
  require_keys(j, {"p", "q", "r"}, "QuadHamiltonian");
  return make_quad_hamiltonian(Poly(coeff_list(j.at("p"), "QuadHamiltonian.p")),
                               Poly(coeff_list(j.at("q"), "QuadHamiltonian.q")),
                               Poly(coeff_list(j.at("r"), "QuadHamiltonian.r")) * -1.0);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string correlations_csv(const std::vector<int>& n, const std::vector<double>& gamma_q,
                             const std::vector<double>& gamma_p,
                             const std::vector<double>& gamma_r,
                             const std::vector<std::pair<std::string, std::string>>& metadata) {
  std::ostringstream out;
  for (const auto& [key, value] : metadata) out << "# " << key << "=" << value << "\n";
  out << "n,gamma_q,gamma_p,gamma_r\n";
  for (size_t i = 0; i < n.size(); ++i)
    out << n[i] << "," << format_double(gamma_q[i]) << "," << format_double(gamma_p[i]) << ","
        << format_double(gamma_r[i]) << "\n";
  return out.str();
}

}  // namespace gmps
