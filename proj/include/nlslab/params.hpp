#pragma once

#include <string>
#include <string_view>

namespace nlslab {

// Coherent: interaction gamma u2^2 conj(u1) (phase sensitive).
// Incoherent: interaction gamma |u2|^2 u1.
enum class Coupling { Coherent, Incoherent };

std::string_view to_string(Coupling c);
Coupling coupling_from_string(std::string_view s);

struct Params {
  double kappa1 = 1.0;
  double kappa2 = 1.0;
  double gamma = 1.0;
  double omega = 1.0;
  Coupling coupling = Coupling::Coherent;

  // Throws std::invalid_argument unless all constants are positive and finite.
  void validate() const;

  // The borderline gamma == kappa1 where psi_vec joins the Hessian kernel.
  bool degenerate() const { return gamma == kappa1; }
};

}  // namespace nlslab
