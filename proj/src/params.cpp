#include "hslab/params.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hslab/io.hpp"

namespace hslab {

using nlohmann::json;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double ParamSet::p_star() const {
    if (p >= static_cast<double>(d)) return kInf;
    return static_cast<double>(d) * p / (static_cast<double>(d) - p);
}

double ParamSet::p_star_eff() const {
    const double de = static_cast<double>(d) + std::max(a, 0.0);
    if (de <= p) return kInf;
    return de * p / (de - p);
}

double ParamSet::hardy_constant() const {
    return std::pow(h_of(a - b), p);
}

bool ParamSet::valid_shape() const {
    return d >= 2 && k >= 1 && k <= d && p > 1.0 && q > p;
}

const char* to_string(Regime r) {
    switch (r) {
        case Regime::Subcritical: return "Subcritical";
        case Regime::Critical: return "Critical";
        case Regime::BottomSubcritical: return "BottomSubcritical";
        case Regime::BottomCritical: return "BottomCritical";
        case Regime::PurelyCylindrical: return "PurelyCylindrical";
        case Regime::PurelySpherical: return "PurelySpherical";
        case Regime::Invalid: return "Invalid";
    }
    return "Invalid";
}

const char* to_string(Attainability a) {
    switch (a) {
        case Attainability::Achieved: return "Achieved";
        case Attainability::NotAchieved: return "NotAchieved";
        case Attainability::ConditionalOnStrictInequality: return "ConditionalOnStrictInequality";
        case Attainability::Unknown: return "Unknown";
    }
    return "Unknown";
}

bool admissible_base(const ParamSet& ps) {
    if (!ps.valid_shape()) return false;
    const double d = ps.d, k = ps.k;
    if (!(k + ps.a > 0.0)) return false;
    if (!(ps.b < d - ps.p + ps.a)) return false;
    if (!(ps.q * ps.h_of(ps.a - ps.b + ps.gamma) > d - k)) return false;
    return true;
}

bool positivity(const ParamSet& ps) {
    if (!admissible_base(ps)) {
        std::ostringstream os;
        os << "inadmissible base parameters: need k+a>0, b<d-p+a, q*H_{a-b+gamma}>d-k "
           << "(d=" << ps.d << ", k=" << ps.k << ", p=" << ps.p << ", q=" << ps.q
           << ", a=" << ps.a << ", b=" << ps.b << ", gamma=" << ps.gamma << ")";
        throw InadmissibleBase(os.str());
    }
    const double d = ps.d;
    const bool a1 = (d - ps.p) * ps.q <= d * ps.p;
    const bool a2 = ps.gamma >= ps.b;
    return a1 && a2;
}

bool is_critical_exponent(const ParamSet& ps) {
    if (ps.p >= static_cast<double>(ps.d)) return false;
    const double pst = ps.p_star();
    return std::abs(ps.q - pst) <= 1e-9 * pst;
}

bool is_bottom(const ParamSet& ps) {
    return detail::nearly(ps.gamma, ps.b);
}

namespace {

bool is_zero(double x) { return detail::nearly(x, 0.0); }

Regime compute_regime(const ParamSet& ps) {
    if (is_bottom(ps)) {
        if (is_zero(ps.b)) return Regime::PurelyCylindrical;
        return is_critical_exponent(ps) ? Regime::BottomCritical : Regime::BottomSubcritical;
    }
    if (is_zero(ps.a) && is_zero(ps.theta())) return Regime::PurelySpherical;
    return is_critical_exponent(ps) ? Regime::Critical : Regime::Subcritical;
}

// Known facts about the purely cylindrical constant M_a(q).
enum class MazyaStatus { Achieved, NotAchieved, Open };

MazyaStatus mazya_status(const ParamSet& ps, std::vector<std::string>& cites) {
    const double d = ps.d;
    // q(d-p) < dp: always achieved.
    if (!is_critical_exponent(ps)) {
        cites.push_back("Prop B.1");
        return MazyaStatus::Achieved;
    }
    // q = p*, p < d.
    if (ps.a < 0.0) {
        cites.push_back("Prop B.1");
        return MazyaStatus::Achieved; // M_a(p*) < S
    }
    if (is_zero(ps.a)) {
        cites.push_back("Sobolev (Aubin-Talenti)");
        return MazyaStatus::Achieved; // plain Sobolev constant
    }
    // a > 0: Hilbertian facts only.
    if (detail::nearly(ps.p, 2.0)) {
        if (ps.k >= 2) {
            cites.push_back("Prop B.2 i");
            return MazyaStatus::NotAchieved; // M_a = S, not achieved
        }
        if (ps.k == 1 && ps.d >= 4) {
            cites.push_back("Prop B.2 ii");
            return ps.a < 2.0 ? MazyaStatus::Achieved : MazyaStatus::NotAchieved;
        }
        if (ps.k == 1 && ps.d == 3) {
            if (ps.a >= 1.0) {
                cites.push_back("Prop B.2 iii");
                return MazyaStatus::NotAchieved;
            }
            cites.push_back("App B (open: d=3, k=1, 0<a<1)");
            return MazyaStatus::Open;
        }
    }
    cites.push_back("App B (open for p != 2, a > 0 at q = p*)");
    (void)d;
    return MazyaStatus::Open;
}

// Conditions H1-H4 under which S_{a,b,gamma}(2*) = S and is never achieved
// (p = 2, d >= 3, a >= 0, b <= 0, (a,b) != (0,0), gamma >= b).
bool nonexistence_h_conditions(const ParamSet& ps, std::string& tag) {
    if (!detail::nearly(ps.p, 2.0) || ps.d < 3) return false;
    if (!(ps.a >= 0.0 && ps.b <= 0.0)) return false;
    if (is_zero(ps.a) && is_zero(ps.b)) return false;
    if (is_zero(ps.a)) { tag = "Thm 5.3 H1"; return true; }
    if (ps.k >= 2 && ps.a > 0.0) { tag = "Thm 5.3 H2"; return true; }
    if (ps.d >= 4 && ps.k == 1 && ps.a >= 2.0) { tag = "Thm 5.3 H3"; return true; }
    if (ps.d == 3 && ps.k == 1 && ps.a >= 1.0) { tag = "Thm 5.3 H4"; return true; }
    return false;
}

Verdict classify_gamma_above(const ParamSet& ps, Regime regime) {
    Verdict v;
    v.positive = true;
    v.regime = regime;

    if (!is_critical_exponent(ps)) {
        v.attainability = Attainability::Achieved;
        v.citations = {"Thm 2 i"};
        return v;
    }

    // Critical case q = p*.
    if (is_zero(ps.a) && is_zero(ps.b)) {
        v.attainability = Attainability::NotAchieved;
        v.condition_note = "S_{0,0,gamma}(p*) = S for every gamma > 0";
        v.citations = {"Thm 4.2 i"};
        return v;
    }
    std::string htag;
    if (nonexistence_h_conditions(ps, htag)) {
        v.attainability = Attainability::NotAchieved;
        v.condition_note = "S_{a,b,gamma}(2*) = S";
        v.citations = {htag, "Thm 4.2 i"};
        return v;
    }

    // Conditional results; collect every applicable window.
    v.attainability = Attainability::ConditionalOnStrictInequality;
    v.condition_note = "achieved if S_{a,b,gamma}(p*) < S";
    v.citations = {"Thm 2 ii"};

    const double pst = ps.p_star();
    const double kp_pstar = ps.k * ps.p / pst;
    const bool cs_ok = ps.a >= 0.0 || kp_pstar + ps.a > 0.0;
    if (cs_ok && !is_zero(ps.a) && ps.a <= ps.b) {
        v.citations.push_back("Thm 4.3 i");
        v.condition_note += "; holds for gamma in (b, b+eps) since S_{a,b,b}(p*) <= G_a [(d-p+a-b)/(d-p)]^{p-p/d} S < S";
    } else if (cs_ok && is_zero(ps.a) && ps.b > 0.0) {
        v.citations.push_back("Thm 4.3 ii");
        v.condition_note += "; holds for gamma in [b, b+eps) since S_{0,b,b}(p*) < S";
    }
    if (kp_pstar + ps.a > 0.0 && ps.gamma >= ps.p * ps.h_of(ps.a)) {
        v.citations.push_back("Thm 4.1 i");
        v.condition_note += "; holds for b in (pH_a-eps, pH_a)";
    } else if (kp_pstar + ps.a <= 0.0 && ps.k + ps.a > 0.0) {
        v.citations.push_back("Thm 4.1 ii");
        v.condition_note += "; holds for b in (min{pH_a, gamma+kp/p*+a}-eps, min{pH_a, gamma+kp/p*+a})";
    }
    return v;
}

Verdict classify_bottom(const ParamSet& ps, Regime regime) {
    Verdict v;
    v.positive = true;
    v.regime = regime;

    if (is_zero(ps.b)) {
        // Purely cylindrical: verdicts are the Maz'ya facts.
        std::vector<std::string> cites;
        const MazyaStatus st = mazya_status(ps, cites);
        v.citations = cites;
        switch (st) {
            case MazyaStatus::Achieved: v.attainability = Attainability::Achieved; break;
            case MazyaStatus::NotAchieved:
                v.attainability = Attainability::NotAchieved;
                v.condition_note = "M_a(p*) = S";
                break;
            case MazyaStatus::Open:
                v.attainability = Attainability::Unknown;
                v.condition_note = "attainability of M_a(p*) is open here";
                break;
        }
        return v;
    }

    if (detail::nearly(ps.p, 2.0)) {
        // Hilbertian bottom case.
        if (ps.b < 0.0) {
            v.attainability = Attainability::NotAchieved;
            v.condition_note = "S_{a,b,b}(q) = M_a(q) for b < 0";
            v.citations = {"Thm 5.1 i"};
            std::string htag;
            if (is_critical_exponent(ps) && nonexistence_h_conditions(ps, htag)) {
                v.citations.push_back(htag);
                v.condition_note += "; here M_a(2*) = S";
            }
            return v;
        }
        // 0 < b < 2H_a.
        std::vector<std::string> cites;
        const MazyaStatus st = mazya_status(ps, cites);
        if (st == MazyaStatus::Achieved) {
            v.attainability = Attainability::Achieved;
            v.condition_note = "b_* = 0 since M_a(q) is achieved";
            v.citations = {"Thm 5.1 i"};
            if (is_critical_exponent(ps)) v.citations.push_back("Thm 5.2");
            v.citations.insert(v.citations.end(), cites.begin(), cites.end());
            return v;
        }
        if (st == MazyaStatus::NotAchieved) {
            v.attainability = Attainability::ConditionalOnStrictInequality;
            v.condition_note =
                "achieved iff S_{a,b,b}(2*) < M_a(2*), i.e. iff b > b_*; b_* in [0,2H_a) unknown";
            v.citations = {"Thm 5.1"};
            v.citations.insert(v.citations.end(), cites.begin(), cites.end());
            return v;
        }
        v.attainability = Attainability::Unknown;
        v.condition_note = "attainability of M_a(2*) is open here, so b_* is unknown";
        v.citations = {"Thm 5.1"};
        v.citations.insert(v.citations.end(), cites.begin(), cites.end());
        return v;
    }

    // p != 2 bottom case.
    v.attainability = Attainability::ConditionalOnStrictInequality;
    v.condition_note = "achieved if S_{a,b,b}(q) < M_a(q)";
    v.citations = {"Thm 3 ii"};
    const double d = ps.d;
    if (is_zero(ps.a) && ps.p * (d - ps.k) < ps.q * (d - ps.p) && ps.q * (d - ps.p) < d * ps.p) {
        v.citations.push_back("Thm 4.4");
        v.condition_note += "; holds for b in (0, eps) with eps in (0, pH_0]";
    }
    if (ps.b > 0.0) {
        v.citations.push_back("Thm 4.5");
        v.condition_note += "; holds for b in (pH_a-eps, pH_a)";
    }
    return v;
}

} // namespace

Verdict classify(const ParamSet& ps) {
    Verdict v;
    if (!ps.valid_shape() || ps.k == ps.d || !admissible_base(ps)) {
        v.positive = false;
        v.regime = Regime::Invalid;
        v.attainability = Attainability::NotAchieved;
        v.condition_note = !ps.valid_shape() || ps.k == ps.d
                               ? "malformed exponents"
                               : "weights not locally integrable";
        v.citations = {"Thm 1"};
        return v;
    }

    const Regime regime = compute_regime(ps);
    const double d = ps.d;
    const bool a1 = (d - ps.p) * ps.q <= d * ps.p;
    const bool a2 = ps.gamma >= ps.b;
    if (!a1 || !a2) {
        v.positive = false;
        v.regime = regime;
        v.attainability = Attainability::NotAchieved;
        v.condition_note = !a2 ? "S_{a,b,gamma}(q) = 0 since gamma < b"
                               : "S_{a,b,gamma}(q) = 0 since (d-p)q > dp";
        v.citations = {"Thm 1"};
        return v;
    }

    if (is_bottom(ps)) return classify_bottom(ps, regime);
    return classify_gamma_above(ps, regime);
}

ParamSet caffarelli_silvestre_params(int n, double s) {
    if (n < 2) throw OutOfRange("caffarelli_silvestre_params: need n >= 2");
    if (!(s >= 0.5 && s < 1.0)) throw OutOfRange("caffarelli_silvestre_params: need 1/2 <= s < 1");
    ParamSet ps;
    ps.d = n + 1;
    ps.k = 1;
    ps.p = 2.0;
    ps.q = 2.0 * (n + 1) / (n - 1);
    ps.a = 1.0 - 2.0 * s;
    ps.b = 0.0;
    // -gamma q/p = 2(1-2s)/(n-1)
    ps.gamma = -2.0 * (1.0 - 2.0 * s) / (n + 1);
    return ps;
}

double sobolev_constant(int d, double p) {
    if (!(d >= 2) || !(p > 1.0) || !(p < static_cast<double>(d)))
        throw OutOfRange("sobolev_constant: need 1 < p < d");
    const double dd = d;
    // Best constant C of ||u||_{p*} <= C ||grad u||_p (Talenti), S = C^{-p}.
    const double lg = std::lgamma(1.0 + dd / 2.0) + std::lgamma(dd) - std::lgamma(dd / p) -
                      std::lgamma(1.0 + dd - dd / p);
    const double c = std::pow(M_PI, -0.5) * std::pow(dd, -1.0 / p) *
                     std::pow((p - 1.0) / (dd - p), 1.0 - 1.0 / p) * std::exp(lg / dd);
    return std::pow(c, -p);
}

namespace {

double resolve_q(const json& j, const ParamSet& partial) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "pstar") {
            const double v = partial.p_star();
            if (!std::isfinite(v)) throw ParseError("q=pstar requires p < d");
            return v;
        }
        if (s == "pstar_eff") {
            const double v = partial.p_star_eff();
            if (!std::isfinite(v)) throw ParseError("q=pstar_eff requires d + max(a,0) > p");
            return v;
        }
        throw ParseError("unrecognized q string: " + s);
    }
    throw ParseError("q must be a number or \"pstar\"/\"pstar_eff\"");
}

ParamSet paramset_from_jobj(const json& j) {
    ParamSet ps;
    try {
        ps.d = j.at("d").get<int>();
        ps.k = j.at("k").get<int>();
        ps.p = j.at("p").get<double>();
        ps.a = j.value("a", 0.0);
        ps.b = j.value("b", 0.0);
        ps.gamma = j.value("gamma", 0.0);
        ps.q = resolve_q(j.at("q"), ps);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad ParamSet JSON: ") + e.what());
    }
    return ps;
}

} // namespace

std::string to_json(const ParamSet& ps) {
    json j{{"d", ps.d}, {"k", ps.k}, {"p", ps.p}, {"q", ps.q},
           {"a", ps.a}, {"b", ps.b}, {"gamma", ps.gamma}};
    return j.dump();
}

ParamSet paramset_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad JSON: ") + e.what());
    }
    return paramset_from_jobj(j);
}

std::vector<ParamSet> paramsets_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad JSON: ") + e.what());
    }
    if (!j.is_array()) throw ParseError("expected a JSON array of ParamSet objects");
    std::vector<ParamSet> out;
    out.reserve(j.size());
    for (const auto& item : j) out.push_back(paramset_from_jobj(item));
    return out;
}

std::string to_json(const Verdict& v, const ParamSet& ps) {
    json j{{"params", json::parse(to_json(ps))},
           {"positive", v.positive},
           {"regime", to_string(v.regime)},
           {"attainability", to_string(v.attainability)},
           {"condition_note", v.condition_note},
           {"citations", v.citations}};
    return j.dump();
}

} // namespace hslab
