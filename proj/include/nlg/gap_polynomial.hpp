#pragma once

namespace nlg {

// score(eta) = d + c1 eta^2 + c2 eta^4, gap(eta) = score(eta) - omega_c.
struct GapPolynomial {
    double d = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double omega_c = 0.0;

    double score(double eta) const {
        const double x = eta * eta;
        return d + x * (c1 + x * c2);
    }
    double gap(double eta) const { return score(eta) - omega_c; }
    double constant() const { return d - omega_c; }

    // Weights in the eta^4 / eta^2(1-eta^2) / (1-eta^2)^2 basis.
    double k_ideal() const { return d + c1 + c2; }
    double k_part_mixed() const { return c1 + 2.0 * d; }
    double k_mixed() const { return d; }

    static GapPolynomial from_weights(double k_ideal, double k_part_mixed, double k_mixed,
                                      double omega_c) {
        return {k_mixed, k_part_mixed - 2.0 * k_mixed, k_ideal - k_part_mixed + k_mixed, omega_c};
    }
};

}  // namespace nlg
