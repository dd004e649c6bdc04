#include "annulus/surface.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>

#include "annulus/errors.hpp"
#include "json.hpp"

namespace annulus {

void AnnulusChart::validate() const {
  if (!(s_min < s_max)) throw PreconditionError("chart: s_min must be below s_max");
  if (!(circumference > 0.0)) throw PreconditionError("chart: circumference must be positive");
  if (!(area_scale > 0.0)) throw PreconditionError("chart: area_scale must be positive");
  if (!std::isfinite(total_area())) throw PreconditionError("chart: total area is not finite");
}

AnnulusChart AnnulusChart::unit_area() { return {0.0, 1.0, kTwoPi, 1.0 / kTwoPi}; }

AnnulusChart AnnulusChart::wide_strip() { return {-2.0, 2.0, kTwoPi, 1.0}; }

ScalarField::ScalarField(AnnulusChart chart, std::size_t ntheta, std::size_t ns,
                         std::vector<double> values)
    : chart_(chart), ntheta_(ntheta), ns_(ns), values_(std::move(values)) {
  chart_.validate();
  if (ntheta_ < 3 || ns_ < 3) throw PreconditionError("field: grid must be at least 3 x 3");
  if (values_.size() != ntheta_ * ns_) throw PreconditionError("field: value count does not match grid");
  for (double v : values_)
    if (!std::isfinite(v)) throw PreconditionError("field: non-finite sample");
}

ScalarField ScalarField::sample(const AnnulusChart& chart, std::size_t ntheta, std::size_t ns,
                                const std::function<double(const Point&)>& fn) {
  chart.validate();
  if (ntheta < 3 || ns < 3) throw PreconditionError("field: grid must be at least 3 x 3");
  std::vector<double> values(ntheta * ns);
  const double dtheta = chart.circumference / static_cast<double>(ntheta);
  const double ds = chart.width() / static_cast<double>(ns - 1);
  for (std::size_t j = 0; j < ns; ++j) {
    // pin the last row to s_max so boundary rows are sampled on the boundary
    const double s = (j + 1 == ns) ? chart.s_max : chart.s_min + ds * static_cast<double>(j);
    for (std::size_t i = 0; i < ntheta; ++i)
      values[j * ntheta + i] = fn({dtheta * static_cast<double>(i), s});
  }
  return ScalarField(chart, ntheta, ns, std::move(values));
}

ScalarField ScalarField::constant(const AnnulusChart& chart, std::size_t ntheta, std::size_t ns,
                                  double value) {
  return ScalarField(chart, ntheta, ns, std::vector<double>(ntheta * ns, value));
}

double ScalarField::eval(const Point& p) const {
  if (!std::isfinite(p.theta) || !std::isfinite(p.s) || !chart_.contains(p))
    throw DomainError("field: point outside the chart strip");
  double x = wrap_periodic(p.theta, chart_.circumference) / theta_step();
  double y = (p.s - chart_.s_min) / s_step();
  if (std::abs(x - std::round(x)) < 1e-9) x = std::round(x);
  if (std::abs(y - std::round(y)) < 1e-9) y = std::round(y);
  auto i0 = static_cast<std::size_t>(std::floor(x));
  auto j0 = static_cast<std::size_t>(std::floor(y));
  if (i0 >= ntheta_) i0 = 0, x = 0.0;
  if (j0 >= ns_ - 1) j0 = ns_ - 2;
  const double fx = x - static_cast<double>(i0);
  const double fy = y - static_cast<double>(j0);
  const std::size_t i1 = (i0 + 1) % ntheta_;
  const double v00 = at(i0, j0), v10 = at(i1, j0), v01 = at(i0, j0 + 1), v11 = at(i1, j0 + 1);
  if (fx == 0.0 && fy == 0.0) return v00;
  return (1.0 - fy) * ((1.0 - fx) * v00 + fx * v10) + fy * ((1.0 - fx) * v01 + fx * v11);
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool ScalarField::boundary_rows_constant() const {
  for (std::size_t j : {std::size_t{0}, ns_ - 1})
    for (std::size_t i = 1; i < ntheta_; ++i)
      if (at(i, j) != at(0, j)) return false;
  return true;
}

bool ScalarField::boundary_rows_zero() const {
  return boundary_rows_constant() && at(0, 0) == 0.0 && at(0, ns_ - 1) == 0.0;
}

ScalarField ScalarField::scaled(double factor) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return ScalarField(chart_, ntheta_, ns_, std::move(v));
}

ScalarField ScalarField::combined(double alpha, const ScalarField& other, double beta) const {
  if (other.ntheta_ != ntheta_ || other.ns_ != ns_ || !(other.chart_ == chart_))
    throw PreconditionError("field: grids differ");
  std::vector<double> v(values_.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = alpha * values_[k] + beta * other.values_[k];
  return ScalarField(chart_, ntheta_, ns_, std::move(v));
}

double integrate(const ScalarField& field) {
  // Periodic in theta, trapezoid in s: the exact integral of the bilinear interpolant.
  const std::size_t nt = field.ntheta(), ns = field.ns();
  double sum = 0.0;
  for (std::size_t j = 0; j < ns; ++j) {
    double row = 0.0;
    for (std::size_t i = 0; i < nt; ++i) row += field.at(i, j);
    sum += (j == 0 || j + 1 == ns) ? 0.5 * row : row;
  }
  return sum * field.cell_area();
}

double triangle_sublevel_area(double a, double b, double c, double area, double level) {
  std::array<double, 3> v{a, b, c};
  std::sort(v.begin(), v.end());
  const double lo = v[0], mid = v[1], hi = v[2];
  if (level <= lo) return 0.0;
  if (level >= hi) return area;
  if (level <= mid) {
    const double t = level - lo;
    return area * t * t / ((hi - lo) * (mid - lo));
  }
  const double t = hi - level;
  return area * (1.0 - t * t / ((hi - lo) * (hi - mid)));
}

double sublevel_area(const ScalarField& field, double level) {
  const std::size_t nt = field.ntheta(), ns = field.ns();
  const double tri = 0.5 * field.cell_area();
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < ns; ++j) {
    for (std::size_t i = 0; i < nt; ++i) {
      const std::size_t i1 = (i + 1) % nt;
      const double v00 = field.at(i, j), v10 = field.at(i1, j);
      const double v01 = field.at(i, j + 1), v11 = field.at(i1, j + 1);
      sum += triangle_sublevel_area(v00, v10, v11, tri, level);
      sum += triangle_sublevel_area(v00, v11, v01, tri, level);
    }
  }
  return sum;
}

namespace {

constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t k = 0;
  for (; k + 2 < bytes.size(); k += 3) {
    const std::uint32_t w = (bytes[k] << 16) | (bytes[k + 1] << 8) | bytes[k + 2];
    for (int sh : {18, 12, 6, 0}) out.push_back(kAlphabet[(w >> sh) & 63]);
  }
  const std::size_t rest = bytes.size() - k;
  if (rest == 1) {
    const std::uint32_t w = bytes[k] << 16;
    out.push_back(kAlphabet[(w >> 18) & 63]);
    out.push_back(kAlphabet[(w >> 12) & 63]);
    out += "==";
  } else if (rest == 2) {
    const std::uint32_t w = (bytes[k] << 16) | (bytes[k + 1] << 8);
    out.push_back(kAlphabet[(w >> 18) & 63]);
    out.push_back(kAlphabet[(w >> 12) & 63]);
    out.push_back(kAlphabet[(w >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  std::array<int, 256> table;
  table.fill(-1);
  for (int k = 0; k < 64; ++k) table[static_cast<unsigned char>(kAlphabet[k])] = k;
  std::vector<std::uint8_t> out;
  std::uint32_t acc = 0;
  int bits = 0;
  for (char ch : text) {
    if (ch == '=') break;
    if (ch == '\n' || ch == '\r' || ch == ' ') continue;
    const int d = table[static_cast<unsigned char>(ch)];
    if (d < 0) throw PreconditionError("field json: invalid base64 payload");
    acc = (acc << 6) | static_cast<std::uint32_t>(d);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xFF));
    }
  }
  return out;
}

}  // namespace

std::string field_to_json(const ScalarField& field) {
  static_assert(std::endian::native == std::endian::little, "payload is little-endian float64");
  std::vector<std::uint8_t> bytes(field.size() * sizeof(double));
  std::memcpy(bytes.data(), field.values().data(), bytes.size());
  nlohmann::json j;
  j["format"] = "annulus-field/1";
  const auto& c = field.chart();
  j["chart"] = {{"s_min", c.s_min}, {"s_max", c.s_max}, {"circumference", c.circumference},
                {"area_scale", c.area_scale}};
  j["ntheta"] = field.ntheta();
  j["ns"] = field.ns();
  j["layout"] = "s-rows";
  j["encoding"] = "base64-f64le";
  j["values"] = base64_encode(bytes);
  return j.dump(2);
}

ScalarField field_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("field json: ") + e.what());
  }
  if (j.value("format", "") != "annulus-field/1") throw PreconditionError("field json: unknown format");
  if (j.value("encoding", "") != "base64-f64le") throw PreconditionError("field json: unknown encoding");
  const auto& cj = j.at("chart");
  AnnulusChart chart{cj.at("s_min").get<double>(), cj.at("s_max").get<double>(),
                     cj.at("circumference").get<double>(), cj.at("area_scale").get<double>()};
  const auto nt = j.at("ntheta").get<std::size_t>();
  const auto ns = j.at("ns").get<std::size_t>();
  const auto bytes = base64_decode(j.at("values").get<std::string>());
  if (bytes.size() != nt * ns * sizeof(double)) throw PreconditionError("field json: payload size mismatch");
  std::vector<double> values(nt * ns);
  std::memcpy(values.data(), bytes.data(), bytes.size());
  return ScalarField(chart, nt, ns, std::move(values));
}

}  // namespace annulus
