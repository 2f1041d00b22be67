#include "cascade/params.hpp"

#include <charconv>
#include <cmath>

namespace cascade {

Hurst Hurst::finite(double h) {
  if (!std::isfinite(h)) {
    throw std::invalid_argument("Hurst::finite: value must be finite; use Hurst::symmetric()");
  }
  return Hurst{h};
}

double Hurst::value() const {
  if (symmetric_) throw RegimeError("symmetric cascade has no finite Hurst value");
  return value_;
}

std::string Hurst::to_string() const {
  if (symmetric_) return "sym";
  // Shortest text that parses back to the same double.
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value_);
  return std::string(buf, res.ptr);
}

Hurst Hurst::parse(const std::string& text) {
  if (text == "sym" || text == "symmetric" || text == "-inf" || text == "-infinity") {
    return symmetric();
  }
  double h = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, h);
  if (ec != std::errc{} || ptr != last) {
    throw std::invalid_argument("cannot parse Hurst value '" + text + "'");
  }
  return finite(h);
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Convergent: return "convergent";
    case Regime::Critical: return "critical";
    case Regime::Divergent: return "divergent";
    case Regime::Symmetric: return "symmetric";
  }
  return "unknown";
}

void CascadeParams::validate() const {
  if (base < 2) throw std::invalid_argument("base must be >= 2");
  if (!hurst.is_symmetric() && hurst.value() > 1.0) {
    throw std::invalid_argument("Hurst parameter must be <= 1");
  }
}

double CascadeParams::weight() const {
  if (hurst.is_symmetric()) return 1.0;
  return std::pow(static_cast<double>(base), -hurst.value());
}

Regime regime_of(const CascadeParams& params) {
  params.validate();
  if (params.hurst.is_symmetric()) return Regime::Symmetric;
  const double h = params.hurst.value();
  if (h > 0.5) return Regime::Convergent;
  if (h == 0.5) return Regime::Critical;
  return Regime::Divergent;
}

SignProbabilities epsilon_probabilities(const CascadeParams& params) {
  params.validate();
  if (params.hurst.is_symmetric()) return {0.5, 0.5};
  const double mean = std::pow(static_cast<double>(params.base), params.hurst.value() - 1.0);
  const double plus = (1.0 + mean) / 2.0;
  // plus lies in [1/2, 1], so 1 - plus is exact and the pair sums to 1.
  return {plus, 1.0 - plus};
}

}  // namespace cascade
