// Walks three 1x1 systems through classification, truncated constants and
// the flow criterion: a rational system, a Kronecker-obstructed one, and the
// golden ratio (which needs numerics).

#include <cstdio>
#include <string>

#include "balab/balab.hpp"

using namespace balab;

namespace {

std::string show(const IntegerCandidate& w) {
  return "q=" + w.q[0].str() + " p=" + w.p[0].str();
}

void report(const char* label, const AffineSystem& sys, bool homogeneous = false) {
  std::printf("== %s  (a = %s, b = %s)\n", label, sys.a()(0, 0).str().c_str(), sys.b()[0].str().c_str());
  if (sys.is_exact()) {
    const auto c = classify(sys);
    std::printf("   classify: %s\n", to_string(c.kind));
    if (c.epsilon) std::printf("   |aq + b + p| >= %s for every q, p\n", c.epsilon->str().c_str());
  }
  ScanOptions opt;
  opt.threads = 1;
  for (std::uint64_t N : {1, 10, 100}) {
    const auto t = c_trunc(sys, N, 100 * N, opt);
    std::printf("   c_trunc(%llu, %llu) = %.10g  at %s\n", static_cast<unsigned long long>(N),
                static_cast<unsigned long long>(100 * N), t.value.to_double(), show(t.witness).c_str());
  }
  const auto e = homogeneous ? dani_homogeneous_eps(FlowSpec(sys), sys.a(), 1000, opt)
                             : epsilon_inf(FlowSpec(sys), sys, 1000, opt);
  std::printf("   %s(Q=1000) = %.10g  at %s\n\n", homogeneous ? "homogeneous_eps" : "epsilon_inf",
              e.value.to_double(), show(e.witness).c_str());
}

}  // namespace

int main() {
  report("rational", AffineSystem(1, 1, {Scalar(Rational(2, 7))}, {Scalar(Rational(1, 7))}));
  report("kronecker", AffineSystem(1, 1, {Scalar(Rational(1, 3))}, {Scalar(Rational(1, 2))}));
  report("golden", AffineSystem(1, 1, {Scalar(1.6180339887498949)}, {Scalar(0.0)}), true);
}
