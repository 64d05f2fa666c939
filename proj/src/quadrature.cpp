#include "egfem/elements.hpp"

#include <cmath>
#include <string>

namespace egfem {

namespace {

void add_centroid(QuadratureRule& rule, double w) {
    rule.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    rule.weights.push_back(w);
}

/// Orbit of (1-2b, b, b): three points.
void add_orbit3(QuadratureRule& rule, double b, double w) {
    const double a = 1.0 - 2.0 * b;
    rule.points.push_back({a, b, b});
    rule.points.push_back({b, a, b});
    rule.points.push_back({b, b, a});
    for (int i = 0; i < 3; ++i) rule.weights.push_back(w);
}

/// Orbit of (a, b, 1-a-b): six points.
void add_orbit6(QuadratureRule& rule, double a, double b, double w) {
    const double c = 1.0 - a - b;
    rule.points.push_back({a, b, c});
    rule.points.push_back({a, c, b});
    rule.points.push_back({b, a, c});
    rule.points.push_back({b, c, a});
    rule.points.push_back({c, a, b});
    rule.points.push_back({c, b, a});
    for (int i = 0; i < 6; ++i) rule.weights.push_back(w);
}

QuadratureRule make_rule(int degree) {
    QuadratureRule rule;
    rule.exactness_degree = degree;
    switch (degree) {
        case 1:
            add_centroid(rule, 1.0);
            break;
        case 2:
            add_orbit3(rule, 1.0 / 6.0, 1.0 / 3.0);
            break;
        case 3:
            add_centroid(rule, -27.0 / 48.0);
            add_orbit3(rule, 0.2, 25.0 / 48.0);
            break;
        case 4:
            add_orbit3(rule, 0.44594849091596488631832925388305, 0.22338158967801146569500700843312);
            add_orbit3(rule, 0.091576213509770743459571463402202, 0.10995174365532186763832632490021);
            break;
        case 5: {
            const double s = std::sqrt(15.0);
            add_centroid(rule, 9.0 / 40.0);
            add_orbit3(rule, (6.0 - s) / 21.0, (155.0 - s) / 1200.0);
            add_orbit3(rule, (6.0 + s) / 21.0, (155.0 + s) / 1200.0);
            break;
        }
        case 6:
            add_orbit3(rule, 0.24928674517091042129163855310702, 0.11678627572637936602528961138558);
            add_orbit3(rule, 0.063089014491502228340331602870819, 0.050844906370206816920936809106869);
            add_orbit6(rule, 0.053145049844816947353249671631398, 0.31035245103378440541660773395655,
                       0.082851075618373575193553456420442);
            break;
        default:
            break;
    }
    return rule;
}

}  // namespace

const QuadratureRule& dunavant_rule(int exactness_degree) {
    static const std::array<QuadratureRule, kMaxQuadratureDegree> rules = [] {
        std::array<QuadratureRule, kMaxQuadratureDegree> r;
        for (int d = 1; d <= kMaxQuadratureDegree; ++d) r[d - 1] = make_rule(d);
        return r;
    }();
    EGFEM_REQUIRE(exactness_degree >= 1 && exactness_degree <= kMaxQuadratureDegree, InvalidArgument,
                  "no Dunavant rule of exactness degree " + std::to_string(exactness_degree) +
                      " (supported: 1.." + std::to_string(kMaxQuadratureDegree) + ")");
    return rules[exactness_degree - 1];
}

LineRule gauss_line_rule(int exactness_degree) {
    const int n = std::max(1, (exactness_degree + 2) / 2);
    // Nodes and weights on [-1, 1].
    std::vector<double> x, w;
    switch (n) {
        case 1: x = {0.0}; w = {2.0}; break;
        case 2: {
            const double a = 1.0 / std::sqrt(3.0);
            x = {-a, a};
            w = {1.0, 1.0};
            break;
        }
        case 3: {
            const double a = std::sqrt(0.6);
            x = {-a, 0.0, a};
            w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
            break;
        }
        case 4: {
            const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(1.2));
            const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(1.2));
            const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
            const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
            x = {-b, -a, a, b};
            w = {wb, wa, wa, wb};
            break;
        }
        default:
            throw InvalidArgument("no line rule of exactness degree " + std::to_string(exactness_degree));
    }
    LineRule rule;
    for (std::size_t i = 0; i < x.size(); ++i) {
        rule.points.push_back(0.5 * (x[i] + 1.0));
        rule.weights.push_back(0.5 * w[i]);
    }
    return rule;
}

}  // namespace egfem
