#include "encircle/signals.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace encircle {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string("reference command: ") + what +
                                " must be finite");
  }
}

void validate_term(const RefTerm& term) {
  std::visit(Overloaded{
                 [](const ConstantTerm& c) { require_finite(c.rc, "rc"); },
                 [](const SinusoidTerm& s) {
                   require_finite(s.offset, "offset");
                   require_finite(s.amplitude, "amplitude");
                   require_finite(s.omega, "omega");
                   require_finite(s.phase, "phase");
                 },
             },
             term);
}

}  // namespace

RefCommand::RefCommand(std::vector<RefTerm> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) {
    throw std::invalid_argument("reference command: empty sum");
  }
  for (const auto& t : terms_) validate_term(t);
  if (!(lower_bound() > 0.0)) {
    throw std::invalid_argument(
        "reference command: distance command must stay positive (lower bound " +
        std::to_string(lower_bound()) + ")");
  }
}

RefCommand RefCommand::constant(double rc) {
  return RefCommand({ConstantTerm{rc}});
}

RefCommand RefCommand::sinusoid(double offset, double amplitude, double omega,
                                double phase) {
  return RefCommand({SinusoidTerm{offset, amplitude, omega, phase}});
}

RefCommand RefCommand::sum(std::vector<RefTerm> terms) {
  return RefCommand(std::move(terms));
}

RefCommand RefCommand::sum(const std::vector<RefCommand>& parts) {
  std::vector<RefTerm> terms;
  for (const auto& p : parts) {
    terms.insert(terms.end(), p.terms_.begin(), p.terms_.end());
  }
  return RefCommand(std::move(terms));
}

RefSample RefCommand::eval(double t) const {
  RefSample out;
  for (const auto& term : terms_) {
    std::visit(Overloaded{
                   [&](const ConstantTerm& c) { out.r += c.rc; },
                   [&](const SinusoidTerm& s) {
                     const double arg = s.omega * t + s.phase;
                     const double sn = std::sin(arg);
                     const double cs = std::cos(arg);
                     out.r += s.offset + s.amplitude * sn;
                     out.r_dot += s.amplitude * s.omega * cs;
                     out.r_ddot -= s.amplitude * s.omega * s.omega * sn;
                   },
               },
               term);
  }
  return out;
}

RefBounds RefCommand::bounds() const {
  RefBounds b;
  for (const auto& term : terms_) {
    if (const auto* s = std::get_if<SinusoidTerm>(&term)) {
      const double a = std::abs(s->amplitude);
      const double w = std::abs(s->omega);
      b.rv += a * w;
      b.ra += a * w * w;
    }
  }
  return b;
}

double RefCommand::lower_bound() const {
  double lb = 0.0;
  for (const auto& term : terms_) {
    std::visit(Overloaded{
                   [&](const ConstantTerm& c) { lb += c.rc; },
                   [&](const SinusoidTerm& s) {
                     // A zero-rate sinusoid is the constant offset + A sin(phase).
                     lb += s.omega == 0.0
                               ? s.offset + s.amplitude * std::sin(s.phase)
                               : s.offset - std::abs(s.amplitude);
                   },
               },
               term);
  }
  return lb;
}

bool RefCommand::is_constant() const {
  for (const auto& term : terms_) {
    if (!std::holds_alternative<ConstantTerm>(term)) return false;
  }
  return true;
}

double RefCommand::constant_value() const {
  double rc = 0.0;
  for (const auto& term : terms_) {
    if (const auto* c = std::get_if<ConstantTerm>(&term)) rc += c->rc;
  }
  return rc;
}

}  // namespace encircle
