#include "nlslab/params.hpp"

#include <cmath>
#include <stdexcept>

namespace nlslab {

std::string_view to_string(Coupling c) {
  return c == Coupling::Coherent ? "coherent" : "incoherent";
}

Coupling coupling_from_string(std::string_view s) {
  if (s == "coherent" || s == "Coherent") return Coupling::Coherent;
  if (s == "incoherent" || s == "Incoherent") return Coupling::Incoherent;
  throw std::invalid_argument("unknown coupling '" + std::string(s) + "'");
}

void Params::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(name) + " must be positive and finite");
    }
  };
  check(kappa1, "kappa1");
  check(kappa2, "kappa2");
  check(gamma, "gamma");
  check(omega, "omega");
}

}  // namespace nlslab
