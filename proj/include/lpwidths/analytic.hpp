#pragma once

#include "lpwidths/sparse_approx.hpp"

namespace lpwidths::analytic {

/// Conversion factor between sphere averages of order statistics and plain
/// expectations of the unnormalized generating variates:
/// value = Gamma(n/p) / Gamma(n/p + 1/p).  value * n^(1/p) is bounded in n.
struct BridgeFactor {
  PNorm p;
  int n;
  double value;
};

BridgeFactor bridge_lemma1(PNorm p, int n);

// Semi-analytic value of the m-th largest coordinate average under the
// sparsity-promoting tensor measure (beta = p/n - 1), 1 <= m <= n:
//   Gamma(n+1) / (Gamma(m) Gamma(n-m+1) Gamma(1+1/p))
//     * int_0^1 omega(y)^(1/p) y^(n-m) (1-y)^(m-1) dy,
// evaluated by adaptive quadrature to ~1e-8 relative accuracy.  Note the
// Gamma(1+1/p) factor: the ratio form of the sphere average requires it
// (cross-checked against direct Monte Carlo).
double theorem17_quadrature(PNorm p, int n, int m);

struct Theorem17Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Shape-only envelopes (calibration constants = 1) for the same quantity:
// lower = Gamma(n+1)Gamma(n/p+n-m+1) / (Gamma(n-m+1)Gamma(n/p+n+1)),
// upper = lower + Gamma(n+1)/(Gamma(n-m+1) m!) (e^-1/Gamma(1/n))^m.
Theorem17Bounds theorem17_bounds(PNorm p, int n, int m);

enum class EnvelopeKind { Thm6Upper, Thm6Lower, Thm9Upper, Prop12, Eq1 };

/// A bound's shape function with a multiplicative calibration constant.
/// The unknown constants in the underlying estimates are never certified;
/// acceptance checks test ratio stability against these shapes instead.
struct BoundEnvelope {
  EnvelopeKind kind;
  PNorm p;
  PNorm q;
  double constant = 1.0;

  double operator()(int n, int m) const;
};

// Shape value with constant = 1.
double bound_envelope(EnvelopeKind kind, PNorm p, PNorm q, int n, int m);

// e^(-EulerGamma), the limit of (Gamma(1/n)/n)^n.
double limit_constant_lemma17();

}  // namespace lpwidths::analytic
