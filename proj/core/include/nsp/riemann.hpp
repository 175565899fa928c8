#pragma once

#include <utility>

namespace nsp::riemann {

/// Constant far-field state. Momentum and potential are derived once at
/// construction: m = n u and phi = -ln n (quasineutral).
struct EndState {
    double n = 1.0;
    double u = 0.0;
    double m = 0.0;
    double phi = 0.0;

    EndState() = default;
    EndState(double density, double velocity);
};

/// Galilean boost u -> u + c.
EndState boost(const EndState& s, double c);

/// Characteristic speeds (u - sqrt(A+1), u + sqrt(A+1)).
std::pair<double, double> characteristics(double n, double u, double A);

/// Left state, right state, speed and mass flux of a 2-shock.
struct ShockConnection {
    EndState left;
    EndState right;
    double A = 1.0;
    double s = 0.0;  ///< shock speed
    double j = 0.0;  ///< mass flux n (u - s), negative for a 2-shock

    double strength() const { return left.n - right.n; }
};

/// Right state of the 2-shock through `left` with right density n_plus.
/// Requires 0 < n_plus < left.n and A > 0.
ShockConnection hugoniot_connect(const EndState& left, double n_plus, double A);

/// Same algebra without the ordering check. Used to inspect inadmissible jumps.
ShockConnection hugoniot_states(const EndState& left, double n_plus, double A);

struct RhResiduals {
    double mass = 0.0;
    double momentum = 0.0;
};

/// Residuals of the two jump conditions, -s[n] + [m] and -s[m] + [m^2/n + (A+1) n].
RhResiduals rh_residuals(const ShockConnection& c);

struct LaxReport {
    bool sound_speed_inequality = false;           ///< sqrt((A+1) n+) < s < sqrt((A+1) n-)
    bool characteristic_inequality = false;  ///< lambda2(right) < s < lambda2(left)
    double lambda2_left = 0.0;
    double lambda2_right = 0.0;
};

LaxReport lax_report(const ShockConnection& c);

/// End points of a 2-rarefaction.
struct RarefactionEndpoints {
    EndState left;
    EndState right;
    double A = 1.0;

    double strength() const { return (right.n - left.n) + (right.u - left.u); }
    double w_left() const;   ///< lambda2 at the left state
    double w_right() const;  ///< lambda2 at the right state
};

/// Right state on the 2-rarefaction curve with density n_plus > left.n.
RarefactionEndpoints make_rarefaction(const EndState& left, double n_plus, double A);

/// Right state on the 2-rarefaction curve with total strength
/// delta_r = (n+ - n-) + (u+ - u-).
RarefactionEndpoints make_rarefaction_by_strength(const EndState& left, double delta_r, double A);

/// |u+ - u- - sqrt(A+1) ln(n+/n-)|
double rarefaction_relation_residual(const RarefactionEndpoints& r);

struct FanState {
    double n = 0.0;
    double u = 0.0;
    double phi = 0.0;
};

/// Self-similar rarefaction at xi = x/t; exact end states outside the fan.
FanState rarefaction_exact(const RarefactionEndpoints& r, double xi);

}  // namespace nsp::riemann
