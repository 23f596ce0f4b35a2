#include "accthr/ilp.hpp"

#include "accthr/errors.hpp"
#include "accthr/polynomial.hpp"
#include "accthr/rng.hpp"
#include "accthr/symgate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

namespace accthr {

// ---------------------------------------------------------------- instance

void IlpInstance::validate() {
    if (n < 0) throw InvalidInput("negative variable count");
    const auto width = static_cast<std::size_t>(n);
    bit_complexity = 0;
    const auto note = [&](const BigInt& v) { bit_complexity = std::max(bit_complexity, bit_length(v)); };
    for (const auto& con : constraints) {
        if (con.a.size() != width)
            throw InvalidInput("constraint has " + std::to_string(con.a.size()) + " coefficients, expected " +
                               std::to_string(n));
        for (const auto& v : con.a) note(v);
        note(con.b);
    }
    if (objective) {
        if (objective->size() != width)
            throw InvalidInput("objective has " + std::to_string(objective->size()) + " coefficients, expected " +
                               std::to_string(n));
        for (const auto& v : *objective) note(v);
    }
}

namespace {

BigInt dot(const std::vector<BigInt>& coeffs, std::uint64_t assignment) {
    BigInt sum = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if ((assignment >> i) & 1U) sum += coeffs[i];
    return sum;
}

}  // namespace

bool IlpInstance::satisfied(std::uint64_t assignment, const std::optional<BigInt>& bound) const {
    for (const auto& con : constraints)
        if (dot(con.a, assignment) > con.b) return false;
    return !bound || objective_value(assignment) >= *bound;
}

BigInt IlpInstance::objective_value(std::uint64_t assignment) const {
    return objective ? dot(*objective, assignment) : BigInt(0);
}

BigInt IlpInstance::objective_span() const {
    BigInt s = 0;
    if (objective)
        for (const auto& c : *objective) s += abs_value(c);
    return s;
}

IlpInstance parse_ilp(std::string_view text) {
    IlpInstance inst;
    bool have_vars = false;
    bool have_header = false;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    const auto number = [&](const std::string& tok) {
        try {
            return parse_bigint(tok);
        } catch (const std::invalid_argument&) {
            throw ParseError(line_no, "malformed integer '" + tok + "'");
        }
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream words(line);
        std::vector<std::string> toks;
        for (std::string t; words >> t;) toks.push_back(t);
        if (toks.empty() || toks[0].starts_with('#')) continue;
        const std::string& head = toks[0];
        if (head == "vars") {
            if (have_vars) throw ParseError(line_no, "repeated 'vars' line");
            if (toks.size() != 2) throw ParseError(line_no, "expected 'vars <n>'");
            const BigInt n = number(toks[1]);
            if (n < 1 || n > 4096) throw ParseError(line_no, "variable count out of range");
            inst.n = n.convert_to<int>();
            have_vars = true;
            continue;
        }
        if (!have_vars) throw ParseError(line_no, "'vars' must come first");
        const auto width = static_cast<std::size_t>(inst.n);
        if (head == "max" || head == "feasibility") {
            if (have_header || !inst.constraints.empty())
                throw ParseError(line_no, "objective line must precede constraints and appear once");
            have_header = true;
            if (head == "feasibility") {
                if (toks.size() != 1) throw ParseError(line_no, "unexpected tokens after 'feasibility'");
                continue;
            }
            if (toks.size() - 1 != width)
                throw ParseError(line_no, "objective has " + std::to_string(toks.size() - 1) + " coefficients, expected " +
                                              std::to_string(inst.n));
            std::vector<BigInt> c;
            for (std::size_t i = 1; i < toks.size(); ++i) c.push_back(number(toks[i]));
            inst.objective = std::move(c);
        } else if (head == "con") {
            if (toks.size() < 3 || toks[toks.size() - 2] != "<=")
                throw ParseError(line_no, "expected 'con <a_1> ... <a_n> <= <b>'");
            const std::size_t count = toks.size() - 3;
            if (count != width)
                throw ParseError(line_no, "constraint has " + std::to_string(count) + " coefficients, expected " +
                                              std::to_string(inst.n));
            IlpConstraint con;
            for (std::size_t i = 1; i + 2 < toks.size(); ++i) con.a.push_back(number(toks[i]));
            con.b = number(toks.back());
            inst.constraints.push_back(std::move(con));
        } else {
            throw ParseError(line_no, "unknown directive '" + head + "'");
        }
    }
    if (!have_vars) throw ParseError(line_no, "missing 'vars' line");
    inst.validate();
    return inst;
}

std::string serialize(const IlpInstance& inst) {
    std::ostringstream out;
    out << "vars " << inst.n << '\n';
    if (inst.objective) {
        out << "max";
        for (const auto& c : *inst.objective) out << ' ' << to_string(c);
        out << '\n';
    } else {
        out << "feasibility\n";
    }
    for (const auto& con : inst.constraints) {
        out << "con";
        for (const auto& a : con.a) out << ' ' << to_string(a);
        out << " <= " << to_string(con.b) << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------- circuit

namespace {

// sum coeffs[i] x_i >= threshold, zero coefficients dropped.
Gate threshold_gate(std::string id, const std::vector<BigInt>& coeffs, BigInt threshold) {
    std::vector<WireRef> wires;
    std::vector<BigInt> weights;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] == 0) continue;
        wires.push_back(WireRef::input(i));
        weights.push_back(coeffs[i]);
    }
    return Gate::thr(std::move(id), std::move(wires), std::move(weights), std::move(threshold));
}

}  // namespace

Circuit feasibility_circuit(const IlpInstance& inst, const std::optional<BigInt>& bound) {
    std::vector<Gate> gates;
    for (std::size_t j = 0; j < inst.constraints.size(); ++j) {
        const auto& con = inst.constraints[j];
        std::vector<BigInt> negated;
        negated.reserve(con.a.size());
        for (const auto& a : con.a) negated.emplace_back(-a);
        gates.push_back(threshold_gate("con" + std::to_string(j + 1), negated, BigInt(-con.b)));
    }
    if (bound) {
        std::vector<BigInt> zeros(static_cast<std::size_t>(inst.n));
        gates.push_back(threshold_gate("objective", inst.objective ? *inst.objective : zeros, *bound));
    }
    std::vector<WireRef> top;
    for (std::size_t g = 0; g < gates.size(); ++g) top.push_back(WireRef::gate(g));
    gates.push_back(Gate::basic("feasible", GateKind::And, std::move(top)));
    const std::size_t out = gates.size() - 1;
    return Circuit(inst.n, std::move(gates), WireRef::gate(out));
}

// ---------------------------------------------------------------- parameters

int default_copy_parameter(const IlpInstance& inst) {
    const double bits = std::max<double>(1.0, static_cast<double>(bit_length(BigInt(inst.bit_complexity))));
    const double log_s = inst.constraints.size() > 1 ? std::log2(static_cast<double>(inst.constraints.size())) : 1.0;
    const double denom = std::max(1.0, bits * std::pow(log_s, 5));
    return std::max(1, static_cast<int>(std::floor(inst.n / denom)));
}

int effective_copy_parameter(const IlpInstance& inst, const IlpSolveParams& params) {
    if (inst.n <= 1) return 0;
    const int k = params.k > 0 ? params.k : default_copy_parameter(inst);
    return std::clamp(k, 1, inst.n - 1);
}

namespace {

// Per-lane counters for up to 2^planes - 1 additions, one bit plane per word array.
class MajorityCounter {
public:
    MajorityCounter(std::size_t size, int repeats) : size_(size), planes_(static_cast<std::size_t>(std::bit_width(static_cast<unsigned>(repeats)))) {
        for (auto& p : planes_) p.assign((size + 63) / 64, 0);
    }

    void add(const BitVector& v) {
        const auto in = v.words();
        for (std::size_t w = 0; w < in.size(); ++w) {
            std::uint64_t carry = in[w];
            for (auto& p : planes_) {
                const std::uint64_t next = p[w] & carry;
                p[w] ^= carry;
                carry = next;
                if (carry == 0) break;
            }
        }
    }

    // Lanes whose count is at least t.
    [[nodiscard]] BitVector at_least(std::uint64_t t) const {
        BitVector out(size_);
        auto words = out.words();
        for (std::size_t w = 0; w < words.size(); ++w) {
            std::uint64_t gt = 0;
            std::uint64_t eq = ~std::uint64_t{0};
            for (std::size_t b = planes_.size(); b-- > 0;) {
                const std::uint64_t c = planes_[b][w];
                if ((t >> b) & 1U) {
                    eq &= c;
                } else {
                    gt |= eq & c;
                    eq &= ~c;
                }
            }
            words[w] = (t >> planes_.size()) != 0 ? 0 : (gt | eq);
        }
        // Clear the tail beyond size_.
        if (size_ % 64 != 0 && !words.empty()) words.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
        return out;
    }

private:
    std::size_t size_;
    std::vector<std::vector<std::uint64_t>> planes_;
};

F2Polynomial shift_variables(const F2Polynomial& p, std::size_t offset) {
    std::vector<std::uint64_t> monomials;
    monomials.reserve(p.monomials().size());
    for (const auto m : p.monomials()) monomials.push_back(offset == 0 ? m : m << offset);
    return F2Polynomial::from_monomials(std::move(monomials));
}

struct CopySet {
    int free_inputs = 0;
    std::vector<std::vector<GeneralizedSymGate>> bottoms;  // per copy, one gate per constraint
};

CopySet lower_copies(const Circuit& c, int k, const Caps& caps) {
    CopySet set;
    set.free_inputs = c.inputs() - k;
    for (const auto& copy : expand_copies(c, k, caps.copy_bits)) {
        std::vector<GeneralizedSymGate> gates;
        const auto& all = copy.gates();
        for (std::size_t g = 0; g + 1 < all.size(); ++g) gates.push_back(normalize_thr_to_sym(all[g], caps.weight_bits));
        set.bottoms.push_back(std::move(gates));
    }
    return set;
}

Circuit and_top(std::size_t m) {
    std::vector<WireRef> wires;
    for (std::size_t i = 0; i < m; ++i) wires.push_back(WireRef::input(i));
    return Circuit(static_cast<int>(m), {Gate::basic("and", GateKind::And, std::move(wires))}, WireRef::gate(0));
}

BitVector evaluate_xor_sym(XorSymCircuit xs, const EvalPlan& plan) {
    return eval_all_symsym(collapse_monomials(xs), plan).bits();
}

// One repeat's output on every free assignment; `exact` is cleared when some copy polynomial
// differs from the exact AND of its gates.
BitVector run_repeat(const CopySet& copies, const Circuit& top, const ProbPolyParams& poly_params, const EvalPlan& plan,
                     IlpRoute route, Rng& rng, std::map<std::pair<std::size_t, std::vector<std::uint64_t>>, BitVector>& cache,
                     bool& exact) {
    const std::size_t count = copies.bottoms.size();
    const auto all_gates = static_cast<std::uint64_t>((std::uint64_t{1} << top.inputs()) - 1);
    std::vector<F2Polynomial> polys;
    polys.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        polys.push_back(sample_prob_poly(top, poly_params, rng));
        const auto& mons = polys.back().monomials();
        if (mons.size() != 1 || mons[0] != all_gates) exact = false;
    }
    const RandomCombiner combiner = or_to_xor_randomized(count, rng);

    if (route == IlpRoute::Factored) {
        std::vector<BitVector> tables;
        tables.reserve(count);
        for (std::size_t j = 0; j < count; ++j) {
            auto key = std::make_pair(j, polys[j].monomials());
            auto it = cache.find(key);
            if (it == cache.end())
                it = cache.emplace(std::move(key), evaluate_xor_sym({copies.free_inputs, copies.bottoms[j], polys[j]}, plan))
                         .first;
            tables.push_back(it->second);
        }
        return combiner.combine(tables);
    }

    const std::size_t per_copy = copies.bottoms.empty() ? 0 : copies.bottoms[0].size();
    if (per_copy * count > F2Polynomial::kMaxVariables)
        throw CapExceeded("literal route needs at most 64 bottom gates over all copies");
    XorSymCircuit xs;
    xs.n = copies.free_inputs;
    std::vector<F2Polynomial> parts;
    for (std::size_t j = 0; j < count; ++j) {
        xs.bottom.insert(xs.bottom.end(), copies.bottoms[j].begin(), copies.bottoms[j].end());
        parts.push_back(shift_variables(polys[j], j * per_copy));
    }
    xs.poly = combiner.expand(parts, poly_params.monomial_cap);
    return evaluate_xor_sym(std::move(xs), plan);
}

FeasibilityReport oracle_feasibility(const Circuit& c, int k, int oracle_limit) {
    FeasibilityReport report;
    report.k = k;
    const TruthTable table = brute_force_truth_table(c, oracle_limit);
    const std::size_t free = std::size_t{1} << (c.inputs() - k);
    const std::size_t copies = std::size_t{1} << k;
    report.majority = BitVector(free);
    for (std::size_t y = 0; y < free; ++y)
        for (std::size_t j = 0; j < copies; ++j)
            if (table.get(j + (y << k))) {
                report.majority.set(y, true);
                break;
            }
    report.any_repeat = report.majority;
    report.majority_ones = report.majority.popcount();
    report.feasible = report.majority_ones > 0;
    report.exact_polynomials = true;
    report.oracle_fallback = true;
    return report;
}

}  // namespace

FeasibilityReport solve_feasibility_randomized(const IlpInstance& inst, const std::optional<BigInt>& bound,
                                               const IlpSolveParams& params) {
    if (params.repeats < 1) throw InvalidInput("repeats must be at least 1");
    if (inst.n < 1) throw InvalidInput("feasibility needs at least one variable");
    const int k = effective_copy_parameter(inst, params);
    const Circuit circuit = feasibility_circuit(inst, bound);
    try {
        const CopySet copies = lower_copies(circuit, k, params.caps);
        const std::size_t per_copy = copies.bottoms[0].size();
        const Circuit top = and_top(per_copy);
        ProbPolyParams poly_params;
        poly_params.eps = params.eps ? *params.eps : Rational{1, std::uint64_t{10} << k};
        poly_params.monomial_cap = params.caps.monomials;
        EvalPlan plan;
        plan.method = params.method;
        plan.rank_cap = params.caps.rank;
        plan.oracle_limit = params.caps.oracle_inputs;
        plan.fallback = true;

        FeasibilityReport report;
        report.k = k;
        const std::size_t free = std::size_t{1} << copies.free_inputs;
        MajorityCounter counter(free, params.repeats);
        std::map<std::pair<std::size_t, std::vector<std::uint64_t>>, BitVector> cache;
        const Rng root(params.seed);
        bool exact = true;
        report.any_repeat = BitVector(free);
        for (int r = 0; r < params.repeats; ++r) {
            Rng rng = root.derive("ilp-repeat", static_cast<std::uint64_t>(r));
            const BitVector out = run_repeat(copies, top, poly_params, plan, params.route, rng, cache, exact);
            report.repeat_ones.push_back(out.popcount());
            counter.add(out);
            report.any_repeat |= out;
        }
        report.exact_polynomials = exact;
        report.majority = counter.at_least(static_cast<std::uint64_t>(params.repeats) / 2 + 1);
        report.majority_ones = report.majority.popcount();
        report.decision = params.decision;
        if (report.decision == IlpDecision::Auto) report.decision = exact ? IlpDecision::AnyRepeat : IlpDecision::Majority;
        report.feasible = report.decision == IlpDecision::AnyRepeat ? report.any_repeat.any() : report.majority_ones > 0;
        return report;
    } catch (const CapExceeded& e) {
        if (!params.oracle_fallback || inst.n > params.caps.oracle_inputs) throw;
        FeasibilityReport report = oracle_feasibility(circuit, k, params.caps.oracle_inputs);
        report.fallback_reason = e.what();
        return report;
    }
}

// ---------------------------------------------------------------- optimization

std::string_view decision_name(IlpDecision d) {
    switch (d) {
        case IlpDecision::Auto: return "auto";
        case IlpDecision::Majority: return "majority";
        case IlpDecision::AnyRepeat: return "any-repeat";
    }
    return "?";
}

std::string_view status_name(IlpStatus s) {
    switch (s) {
        case IlpStatus::Optimal: return "optimal";
        case IlpStatus::Feasible: return "feasible";
        case IlpStatus::Infeasible: return "infeasible";
    }
    return "?";
}

namespace {

// x_1 fixed to `value`; the bound moves by the fixed objective term.
std::pair<IlpInstance, std::optional<BigInt>> fix_first(const IlpInstance& inst, const std::optional<BigInt>& bound,
                                                        bool value) {
    IlpInstance out;
    out.n = inst.n - 1;
    for (const auto& con : inst.constraints) {
        IlpConstraint c{{con.a.begin() + 1, con.a.end()}, value ? BigInt(con.b - con.a[0]) : con.b};
        out.constraints.push_back(std::move(c));
    }
    std::optional<BigInt> next = bound;
    if (inst.objective) {
        out.objective = std::vector<BigInt>(inst.objective->begin() + 1, inst.objective->end());
        if (next && value) *next -= inst.objective->front();
    }
    out.validate();
    return {std::move(out), std::move(next)};
}

class FeasibilityOracle {
public:
    explicit FeasibilityOracle(const IlpSolveParams& params) : params_(params), root_(params.seed) {}

    IlpCall call(const IlpInstance& inst, const std::optional<BigInt>& bound) {
        IlpCall rec;
        rec.bound = bound;
        if (inst.n == 0) {
            rec.feasible = inst.satisfied(0, bound);
            return rec;
        }
        IlpSolveParams p = params_;
        p.seed = root_.derive("ilp-call", calls_++).key();
        FeasibilityReport report = solve_feasibility_randomized(inst, bound, p);
        rec.feasible = report.feasible;
        rec.majority_ones = report.majority_ones;
        rec.repeat_ones = std::move(report.repeat_ones);
        rec.decision = report.decision;
        rec.oracle_fallback = report.oracle_fallback;
        return rec;
    }

private:
    IlpSolveParams params_;
    Rng root_;
    std::uint64_t calls_ = 0;
};

}  // namespace

IlpResult optimize(const IlpInstance& inst, const IlpSolveParams& params) {
    IlpResult result;
    result.diagnostics.k = effective_copy_parameter(inst, params);
    FeasibilityOracle oracle(params);
    const auto record = [&](IlpCall c) {
        const bool ok = c.feasible;
        result.diagnostics.oracle_fallback = result.diagnostics.oracle_fallback || c.oracle_fallback;
        result.diagnostics.search_calls.push_back(std::move(c));
        return ok;
    };

    std::optional<BigInt> bound;
    if (inst.objective) {
        const BigInt span = inst.objective_span();
        BigInt lo = -span;
        BigInt hi = span;
        if (!record(oracle.call(inst, lo))) return result;
        while (lo < hi) {
            BigInt mid = lo + (hi - lo + 1) / 2;
            if (record(oracle.call(inst, mid)))
                lo = mid;
            else
                hi = mid - 1;
        }
        result.status = IlpStatus::Optimal;
        result.value = lo;
        bound = lo;
    } else {
        if (!record(oracle.call(inst, std::nullopt))) return result;
        result.status = IlpStatus::Feasible;
    }

    if (params.witness) {
        std::vector<std::uint8_t> x;
        IlpInstance cur = inst;
        std::optional<BigInt> cur_bound = bound;
        while (cur.n > 0) {
            auto [one, one_bound] = fix_first(cur, cur_bound, true);
            ++result.diagnostics.witness_calls;
            const IlpCall c = oracle.call(one, one_bound);
            result.diagnostics.oracle_fallback = result.diagnostics.oracle_fallback || c.oracle_fallback;
            if (c.feasible) {
                x.push_back(1);
                cur = std::move(one);
                cur_bound = std::move(one_bound);
            } else {
                x.push_back(0);
                std::tie(cur, cur_bound) = fix_first(cur, cur_bound, false);
            }
        }
        std::uint64_t assignment = 0;
        for (std::size_t i = 0; i < x.size(); ++i) assignment |= static_cast<std::uint64_t>(x[i]) << i;
        if (inst.satisfied(assignment, bound))
            result.witness = std::move(x);
        else
            result.diagnostics.witness_rejected = true;
    }
    return result;
}

IlpResult brute_force_ilp(const IlpInstance& inst, int oracle_limit) {
    if (inst.n > oracle_limit) throw CapExceeded("exhaustive search limited to " + std::to_string(oracle_limit) + " variables");
    IlpResult result;
    std::optional<BigInt> best;
    std::uint64_t best_x = 0;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << inst.n); ++x) {
        if (!inst.satisfied(x)) continue;
        const BigInt v = inst.objective_value(x);
        if (!best || v > *best) {
            best = v;
            best_x = x;
        }
        if (!inst.objective) break;
    }
    if (!best) return result;
    result.status = inst.objective ? IlpStatus::Optimal : IlpStatus::Feasible;
    if (inst.objective) result.value = best;
    std::vector<std::uint8_t> w(static_cast<std::size_t>(inst.n));
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = (best_x >> i) & 1U;
    result.witness = std::move(w);
    return result;
}

}  // namespace accthr
