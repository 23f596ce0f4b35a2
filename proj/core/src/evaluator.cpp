#include "accthr/evaluator.hpp"

#include "accthr/errors.hpp"
#include "accthr/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

namespace accthr {

std::string_view method_name(EvalMethod m) {
    switch (m) {
        case EvalMethod::Oracle: return "oracle";
        case EvalMethod::SymrankNaiveMm: return "symrank-naive-mm";
        case EvalMethod::SymrankCoppersmith: return "symrank-coppersmith";
        case EvalMethod::DirectOuterSum: return "direct-outer-sum";
    }
    return "?";
}

EvalMethod parse_method(std::string_view name) {
    for (const auto m : {EvalMethod::Oracle, EvalMethod::SymrankNaiveMm, EvalMethod::SymrankCoppersmith,
                         EvalMethod::DirectOuterSum})
        if (method_name(m) == name) return m;
    throw InvalidInput("unknown evaluation method '" + std::string(name) + "'");
}

std::string_view path_name(CountPath p) {
    switch (p) {
        case CountPath::Collapse: return "collapse";
        case CountPath::CopyBatch: return "copy-batch";
        case CountPath::Randomized: return "randomized";
        case CountPath::Oracle: return "oracle";
        case CountPath::Direct: return "direct";
    }
    return "?";
}

BitMatrix apply_filter(const CountMatrix& counts, std::span<const std::uint8_t> filter) {
    BitMatrix out(counts.rows, counts.cols);
    for (std::size_t i = 0; i < counts.rows; ++i)
        for (std::size_t j = 0; j < counts.cols; ++j) {
            const std::uint32_t v = counts.at(i, j);
            if (v >= filter.size())
                throw InvalidInput("count " + std::to_string(v) + " outside the filter domain 0.." +
                                   std::to_string(filter.size() - 1));
            if (filter[v] != 0) out.set(i, j, true);
        }
    return out;
}

TruthTable to_truth_table(const BitMatrix& m, int n, int left_bits) {
    TruthTable t(n);
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (m.get(i, j)) t.set(i + (j << left_bits), true);
    return t;
}

namespace {

TruthTable eval_oracle(const SymSymCircuit& c, int limit) {
    if (c.n > limit) throw CapExceeded("oracle evaluation limited to " + std::to_string(limit) + " inputs");
    TruthTable t(c.n);
    for (std::uint64_t x = 0; x < t.size(); ++x)
        if (c.eval(x)) t.set(x, true);
    return t;
}

CountMatrix direct_counts(const SymSymCircuit& c, int left_bits, int right_bits) {
    const auto lb = static_cast<std::size_t>(left_bits);
    const auto rb = static_cast<std::size_t>(right_bits);
    CountMatrix counts(std::size_t{1} << lb, std::size_t{1} << rb);
    for (const auto& g : c.bottom) {
        const HalfSums left = half_sums(g, 0, lb);
        const HalfSums right = half_sums(g, lb, rb);
        const std::size_t nr = right.values.size();
        const std::vector<std::uint8_t> accept = accept_pairs(g, left, right);
        for (std::size_t i = 0; i < counts.rows; ++i) {
            const std::uint8_t* row = &accept[static_cast<std::size_t>(left.index[i]) * nr];
            for (std::size_t j = 0; j < counts.cols; ++j) counts.at(i, j) += row[right.index[j]];
        }
    }
    return counts;
}

// Dense product over the integers with rows of A and columns of B packed into words.
CountMatrix naive_counts(const SymRankDecomp& d, std::uint64_t& ops) {
    const std::size_t r = d.rank();
    const std::size_t words = (r + 63) / 64;
    const auto pack = [&](const std::vector<std::vector<std::uint32_t>>& lists) {
        std::vector<std::uint64_t> packed(lists.size() * words, 0);
        for (std::size_t i = 0; i < lists.size(); ++i)
            for (const auto k : lists[i]) packed[i * words + k / 64] |= std::uint64_t{1} << (k % 64);
        return packed;
    };
    const auto a = pack(d.a_rows);
    const auto b = pack(d.b_cols);
    CountMatrix counts(d.a.rows(), d.b.cols());
    for (std::size_t i = 0; i < counts.rows; ++i)
        for (std::size_t j = 0; j < counts.cols; ++j) {
            std::uint32_t s = 0;
            for (std::size_t w = 0; w < words; ++w)
                s += static_cast<std::uint32_t>(std::popcount(a[i * words + w] & b[j * words + w]));
            counts.at(i, j) = s;
        }
    ops += counts.rows * counts.cols * r;
    return counts;
}

CountMatrix coppersmith_counts(const SymRankDecomp& d, const EvalPlan& plan, std::uint64_t& ops) {
    const PrimeField f(plan.prime);
    if (f.modulus() <= d.rank()) throw InvalidInput("field modulus must exceed the rank");
    FieldMatrix a(d.a.rows(), d.rank());
    FieldMatrix b(d.rank(), d.b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (const auto k : d.a_rows[i]) a(i, k) = 1;
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (const auto k : d.b_cols[j]) b(k, j) = 1;
    OpCounter counter;
    const FieldMatrix n = coppersmith_rect_mm(f, a, b, plan.mm, &counter);
    ops += counter.multiplications;
    CountMatrix counts(n.rows(), n.cols());
    for (std::size_t k = 0; k < n.data().size(); ++k) counts.values[k] = static_cast<std::uint32_t>(n.data()[k]);
    return counts;
}

}  // namespace

TruthTable eval_all_symsym(const SymSymCircuit& c, const EvalPlan& plan, EvalStats* stats) {
    c.validate();
    EvalStats local;
    local.used = plan.method;
    const int left_bits = (c.n + 1) / 2;
    const int right_bits = c.n / 2;
    TruthTable result;

    const auto direct = [&] {
        local.used = EvalMethod::DirectOuterSum;
        return to_truth_table(apply_filter(direct_counts(c, left_bits, right_bits), c.top), c.n, left_bits);
    };

    switch (plan.method) {
        case EvalMethod::Oracle: result = eval_oracle(c, plan.oracle_limit); break;
        case EvalMethod::DirectOuterSum: result = direct(); break;
        case EvalMethod::SymrankNaiveMm:
        case EvalMethod::SymrankCoppersmith: {
            std::optional<SymRankDecomp> d;
            try {
                d = decompose(c, plan.rank_cap);
            } catch (const CapExceeded&) {
                if (!plan.fallback) throw;
            }
            if (!d) {
                result = direct();
                break;
            }
            local.rank = d->rank();
            if (plan.method == EvalMethod::SymrankCoppersmith) {
                const std::size_t side = std::max(d->a.rows(), d->b.cols());
                if (plan.mm.enforce_alpha && !alpha_admissible(side, d->rank(), plan.mm.alpha)) {
                    if (!plan.fallback)
                        throw CapExceeded("rank " + std::to_string(d->rank()) + " exceeds (2^h)^alpha for h = " +
                                          std::to_string(left_bits));
                    local.used = EvalMethod::SymrankNaiveMm;
                }
            }
            const CountMatrix counts = local.used == EvalMethod::SymrankCoppersmith
                                           ? coppersmith_counts(*d, plan, local.multiplications)
                                           : naive_counts(*d, local.multiplications);
            result = to_truth_table(apply_filter(counts, d->filter), c.n, left_bits);
            break;
        }
    }
    if (stats != nullptr) *stats = local;
    return result;
}

// ---------------------------------------------------------------- counting

int default_ell(int n) {
    const int upper = (n - 1) / 2;
    const int ell = static_cast<int>(std::floor(std::cbrt(static_cast<double>(n)) + 1e-9));
    return std::clamp(ell, 1, std::max(1, upper));
}

namespace {

bool is_bottom_gate(const Gate& g) {
    return std::none_of(g.inputs.begin(), g.inputs.end(), [](const WireRef& w) { return w.from_gate; });
}

bool lowerable(const Gate& g) { return is_bottom_gate(g) && (g.kind == GateKind::Thr || is_symmetric_kind(g.kind)); }

bool parity_kind(const Gate& g) {
    return g.kind == GateKind::And || g.kind == GateKind::Or || g.kind == GateKind::Xor ||
           (g.kind == GateKind::Mod && g.modulus == 2);
}

// Fixed values for copy `a`: the last 2 ell inputs read the bits of a.
std::vector<int> copy_fixes(int n, int ell, std::uint64_t a) {
    std::vector<int> fixed(static_cast<std::size_t>(n), -1);
    const int first = n - 2 * ell;
    for (int b = 0; b < 2 * ell; ++b) fixed[static_cast<std::size_t>(first + b)] = static_cast<int>((a >> b) & 1U);
    return fixed;
}

std::vector<std::uint8_t> count_bit_table(int ell, int bit) {
    const std::size_t copies = std::size_t{1} << (2 * ell);
    std::vector<std::uint8_t> t(copies + 1);
    for (std::size_t v = 0; v <= copies; ++v) t[v] = (v >> bit) & 1U;
    return t;
}

// Sum over the free inputs of the (2 ell + 1)-bit per-assignment copy counts.
std::uint64_t sum_bits(const std::vector<std::uint32_t>& per_assignment, int ell) {
    std::uint64_t total = 0;
    for (int i = 0; i <= 2 * ell; ++i) {
        const auto table = count_bit_table(ell, i);
        std::uint64_t ones = 0;
        for (const auto v : per_assignment) ones += table[v];
        total += ones << i;
    }
    return total;
}

// Bottom layer as generalized gates plus the AND/OR/XOR layers above it as a circuit whose
// inputs are the bottom values.
struct LayeredTop {
    std::vector<GeneralizedSymGate> bottom;
    Circuit top;
};

std::optional<LayeredTop> split_parity_top(const Circuit& c, unsigned weight_bits) {
    const auto& gates = c.gates();
    const auto live = c.reachable();
    if (!c.output().from_gate || lowerable(gates[c.output().index])) return std::nullopt;
    std::map<std::pair<bool, std::size_t>, std::size_t> var_of;  // (is gate, index) -> variable
    LayeredTop out;
    const auto variable = [&](const WireRef& w) {
        const auto key = std::make_pair(w.from_gate, w.index);
        auto it = var_of.find(key);
        if (it != var_of.end()) return it->second;
        const std::size_t v = out.bottom.size();
        out.bottom.push_back(w.from_gate ? lower_bottom_gate(gates[w.index], weight_bits)
                                         : GeneralizedSymGate::literal({w.index, false}));
        var_of.emplace(key, v);
        return v;
    };
    std::vector<std::size_t> new_index(gates.size(), 0);
    std::vector<Gate> upper;
    for (std::size_t g = 0; g < gates.size(); ++g) {
        if (!live[g] || lowerable(gates[g])) continue;
        if (!parity_kind(gates[g])) return std::nullopt;
        Gate copy = gates[g];
        for (auto& w : copy.inputs) {
            if (w.from_gate && !lowerable(gates[w.index])) {
                w.index = new_index[w.index];
            } else {
                w = WireRef::input(variable(w), w.negated, w.multiplicity);
            }
        }
        new_index[g] = upper.size();
        upper.push_back(std::move(copy));
    }
    if (out.bottom.size() > F2Polynomial::kMaxVariables)
        throw CapExceeded("more than 64 distinct bottom values under the AC0[2] layers");
    WireRef o = c.output();
    o.index = new_index[o.index];
    out.top = Circuit(static_cast<int>(out.bottom.size()), std::move(upper), o);
    return out;
}

}  // namespace

CountReport count_sat_split(const Circuit& c, const CountOptions& options, const EvalPlan& plan) {
    const int n = c.inputs();
    CountReport report;
    if (n < 3) {
        // No split leaves at least one free input.
        report.count = brute_force_count_sat(c, plan.oracle_limit);
        report.path = CountPath::Oracle;
        return report;
    }
    const int ell = options.ell > 0 ? options.ell : default_ell(n);
    if (2 * ell >= n) throw InvalidInput("ell must satisfy 2 ell < n");
    if (static_cast<unsigned>(2 * ell) > options.copy_bits) throw CapExceeded("2^(2 ell) copies exceed the size cap");
    report.ell = ell;
    const int free_inputs = n - 2 * ell;
    const std::uint64_t copies = std::uint64_t{1} << (2 * ell);
    const std::size_t free_size = std::size_t{1} << free_inputs;

    const auto track = [&](const EvalStats& s) { report.max_rank = std::max(report.max_rank, s.rank); };

    if (!options.force_randomized) {
        if (auto single = collapse_to_single_gate(c, options.weight_bits)) {
            // Each B_i is itself SYM of SYM: its bottoms are the restricted copies of one gate.
            SymSymCircuit bank;
            bank.n = free_inputs;
            for (std::uint64_t a = 0; a < copies; ++a) bank.bottom.push_back(single->restricted(copy_fixes(n, ell, a)));
            for (int i = 0; i <= 2 * ell; ++i) {
                bank.top = count_bit_table(ell, i);
                EvalStats st;
                report.count += eval_all_symsym(bank, plan, &st).count() << i;
                track(st);
            }
            report.path = CountPath::Collapse;
            return report;
        }
        std::optional<SymSymCircuit> lowered;
        try {
            lowered = lower_to_symsym(c, options.weight_bits);
        } catch (const ShapeError&) {
        }
        if (lowered) {
            std::vector<std::uint32_t> per_assignment(free_size, 0);
            for (std::uint64_t a = 0; a < copies; ++a) {
                SymSymCircuit copy;
                copy.n = free_inputs;
                copy.top = lowered->top;
                const auto fixed = copy_fixes(n, ell, a);
                for (const auto& g : lowered->bottom) copy.bottom.push_back(g.restricted(fixed));
                EvalStats st;
                const TruthTable t = eval_all_symsym(copy, plan, &st);
                track(st);
                for (std::size_t x = 0; x < free_size; ++x) per_assignment[x] += t.get(x) ? 1 : 0;
            }
            report.count = sum_bits(per_assignment, ell);
            report.path = CountPath::CopyBatch;
            return report;
        }
    }

    if (auto layered = split_parity_top(c, options.weight_bits)) {
        const Rng base(options.seed);
        std::vector<F2Polynomial> samples;
        for (int r = 0; r < options.repetitions; ++r) {
            Rng rng = base.derive("prob-poly", static_cast<std::uint64_t>(r));
            ProbPolyParams params;
            params.eps = options.eps;
            params.monomial_cap = options.monomial_cap;
            samples.push_back(sample_prob_poly(layered->top, params, rng));
        }
        std::vector<std::uint32_t> per_assignment(free_size, 0);
        std::vector<std::uint32_t> votes(free_size);
        for (std::uint64_t a = 0; a < copies; ++a) {
            const auto fixed = copy_fixes(n, ell, a);
            XorSymCircuit copy;
            copy.n = free_inputs;
            for (const auto& g : layered->bottom) copy.bottom.push_back(g.restricted(fixed));
            std::fill(votes.begin(), votes.end(), 0);
            for (const auto& p : samples) {
                copy.poly = p;
                EvalStats st;
                const TruthTable t = eval_all_symsym(collapse_monomials(copy), plan, &st);
                track(st);
                for (std::size_t x = 0; x < free_size; ++x) votes[x] += t.get(x) ? 1 : 0;
            }
            // Majority over independent samples.
            for (std::size_t x = 0; x < free_size; ++x)
                per_assignment[x] += 2 * votes[x] > static_cast<std::uint32_t>(options.repetitions) ? 1 : 0;
        }
        report.count = sum_bits(per_assignment, ell);
        report.path = CountPath::Randomized;
        return report;
    }

    if (!options.oracle_fallback) throw ShapeError("circuit shape is not reducible for split counting");
    report.count = brute_force_count_sat(c, plan.oracle_limit);
    report.path = CountPath::Oracle;
    return report;
}

bool equiv_via_count(const Circuit& g, const Circuit& h, const CountOptions& options, const EvalPlan& plan) {
    if (g.inputs() != h.inputs()) throw InvalidInput("equivalence needs equal input counts");
    const std::uint64_t cg = count_sat_split(g, options, plan).count;
    const std::uint64_t ch = count_sat_split(h, options, plan).count;
    if (cg != ch) return false;
    return count_sat_split(conjunction(g, h), options, plan).count == cg;
}

bool antiequiv_via_count(const Circuit& g, const Circuit& h, const CountOptions& options, const EvalPlan& plan) {
    if (g.inputs() != h.inputs()) throw InvalidInput("equivalence needs equal input counts");
    const std::uint64_t total = std::uint64_t{1} << g.inputs();
    const std::uint64_t cg = count_sat_split(g, options, plan).count;
    const std::uint64_t ch = count_sat_split(h, options, plan).count;
    if (cg + ch != total) return false;
    return count_sat_split(conjunction(g, h), options, plan).count == 0;
}

}  // namespace accthr
