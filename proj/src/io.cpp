#include "slspec/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace slspec {

std::string format_real(Real x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {
Json complex_to_json(Complex c) {
  if (c.imag() == 0.0) return Json(c.real());
  return Json::array({c.real(), c.imag()});
}
Complex complex_from_json(const Json& j) {
  if (j.is_number()) return Complex(j.get<Real>(), 0.0);
  if (j.is_array() && j.size() == 2)
    return Complex(j[0].get<Real>(), j[1].get<Real>());
  throw std::invalid_argument("expected number or [re, im] pair");
}
Json cvector_to_json(const std::vector<Complex>& v) {
  Json a = Json::array();
  for (const Complex& c : v) a.push_back(complex_to_json(c));
  return a;
}
std::vector<Complex> cvector_from_json(const Json& j) {
  std::vector<Complex> v;
  for (const auto& e : j) v.push_back(complex_from_json(e));
  return v;
}
}  // namespace

Json potential_to_json(const PotentialSpec& p) {
  Json j;
  if (p.is_fourier()) {
    j["kind"] = "fourier";
    j["c0"] = complex_to_json(p.c0());
    j["cos"] = cvector_to_json(p.cos_coeffs());
    j["sin"] = cvector_to_json(p.sin_coeffs());
  } else {
    j["kind"] = "piecewise_linear";
    j["x"] = p.knots_x();
    j["y"] = cvector_to_json(p.knots_y());
  }
  return j;
}

PotentialSpec potential_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "fourier") {
    Complex c0 = j.contains("c0") ? complex_from_json(j["c0"]) : Complex(0.0);
    std::vector<Complex> cos_c, sin_c;
    if (j.contains("cos")) cos_c = cvector_from_json(j["cos"]);
    if (j.contains("sin")) sin_c = cvector_from_json(j["sin"]);
    return PotentialSpec::fourier(c0, std::move(cos_c), std::move(sin_c));
  }
  if (kind == "piecewise_linear") {
    std::vector<Real> x = j.at("x").get<std::vector<Real>>();
    std::vector<Complex> y = cvector_from_json(j.at("y"));
    return PotentialSpec::piecewise_linear(std::move(x), std::move(y));
  }
  throw std::invalid_argument("potential_from_json: unknown kind " + kind);
}

Json spectrum_to_json(const Spectrum& s) {
  Json j;
  j["method"] = s.method;
  j["bc"] = bc_name(s.bc);
  if (s.galerkin_N > 0) j["galerkin_N"] = s.galerkin_N;
  Json rows = Json::array();
  for (std::size_t i = 0; i < s.indices.size(); ++i) {
    Json r;
    r["n"] = s.indices[i];
    r["rho"] = complex_to_json(s.rho[static_cast<Eigen::Index>(i)]);
    r["lambda"] = complex_to_json(s.lambda[static_cast<Eigen::Index>(i)]);
    r["residual"] = s.residuals[static_cast<Eigen::Index>(i)];
    rows.push_back(r);
  }
  j["eigenvalues"] = rows;
  return j;
}

std::string spectrum_to_csv(const Spectrum& s) {
  std::string out = "n,re_rho,im_rho,re_lambda,im_lambda,residual\n";
  for (std::size_t i = 0; i < s.indices.size(); ++i) {
    Eigen::Index e = static_cast<Eigen::Index>(i);
    out += std::to_string(s.indices[i]) + ',' + format_real(s.rho[e].real()) + ',' +
           format_real(s.rho[e].imag()) + ',' + format_real(s.lambda[e].real()) +
           ',' + format_real(s.lambda[e].imag()) + ',' +
           format_real(s.residuals[e]) + '\n';
  }
  return out;
}

std::string sequence_to_csv(const CVector& v) {
  std::string out = "k,re,im\n";
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out += std::to_string(i + 1) + ',' + format_real(v[i].real()) + ',' +
           format_real(v[i].imag()) + '\n';
  return out;
}

Json sequence_to_json(const CVector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_to_json(v[i]));
  return a;
}

Json hat_element_to_json(const HatElement& h) {
  Json j;
  j["theta"] = h.theta;
  j["m"] = h.m;
  Json alphas = Json::array();
  for (Eigen::Index i = 0; i < h.alphas.size(); ++i)
    alphas.push_back(complex_to_json(h.alphas[i]));
  j["alphas"] = alphas;
  j["l2_part"] = sequence_to_json(h.l2_part.values);
  return j;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
    out << content;
    if (!out.good()) throw std::runtime_error("atomic_write: write failed");
  }
  fs::rename(tmp, path);
}

}  // namespace slspec
