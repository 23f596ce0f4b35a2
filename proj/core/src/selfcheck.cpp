#include "accthr/selfcheck.hpp"

#include "accthr/circuit.hpp"
#include "accthr/depth2.hpp"
#include "accthr/evaluator.hpp"
#include "accthr/generators.hpp"
#include "accthr/ilp.hpp"
#include "accthr/rectmm.hpp"
#include "accthr/rng.hpp"
#include "accthr/symrank.hpp"
#include "accthr/transforms.hpp"

#include <algorithm>
#include <array>
#include <exception>
#include <functional>
#include <ostream>

namespace accthr {

bool SelfcheckReport::passed() const {
    return std::all_of(modules.begin(), modules.end(), [](const ModuleCheck& m) { return m.passed; });
}

namespace {

// Runs `cases` trials of `trial`, which returns an empty string on success.
ModuleCheck run_module(std::string name, int cases, const std::function<std::string(int)>& trial) {
    ModuleCheck m;
    m.module = std::move(name);
    for (int t = 0; t < cases; ++t) {
        std::string failure;
        try {
            failure = trial(t);
        } catch (const std::exception& e) {
            failure = std::string("exception: ") + e.what();
        }
        ++m.cases;
        if (!failure.empty()) {
            ++m.failures;
            if (m.detail.empty()) m.detail = "case " + std::to_string(t) + ": " + failure;
        }
    }
    m.passed = m.failures == 0;
    return m;
}

// Recursive pattern mask: every (row digit, column digit) pair must be on the base pattern.
template <std::size_t N>
bool on_pattern(std::size_t two_side, std::size_t three_side, int m, const std::array<std::array<int, 2>, N>& pattern,
                bool rows_are_binary) {
    for (int level = 0; level < m; ++level) {
        const int bit = static_cast<int>(two_side & 1U);
        const int trit = static_cast<int>(three_side % 3);
        two_side >>= 1;
        three_side /= 3;
        const bool hit = std::any_of(pattern.begin(), pattern.end(), [&](const auto& p) {
            return rows_are_binary ? (p[0] == bit && p[1] == trit) : (p[0] == trit && p[1] == bit);
        });
        if (!hit) return false;
    }
    return true;
}

FieldMatrix pattern_matrix(const PrimeField& f, int m, bool a_side, Rng& rng) {
    std::size_t two = 1;
    std::size_t three = 1;
    for (int i = 0; i < m; ++i) {
        two *= 2;
        three *= 3;
    }
    FieldMatrix out = a_side ? FieldMatrix(two, three) : FieldMatrix(three, two);
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j) {
            const bool keep = a_side ? on_pattern(i, j, m, kAPattern, true) : on_pattern(j, i, m, kBPattern, false);
            if (keep) out(i, j) = rng.below(f.modulus());
        }
    return out;
}

}  // namespace

SelfcheckReport run_selfcheck(const SelfcheckOptions& options) {
    SelfcheckReport report;
    const Rng root(options.seed);
    const int cases = std::max(1, options.cases);

    report.modules.push_back(run_module("circuit-core", cases, [&](int t) -> std::string {
        Rng rng = root.derive("circuit-core", static_cast<std::uint64_t>(t));
        const Circuit c = random_circuit(8, 12, rng);
        const Circuit back = parse_circuit(serialize(c));
        if (brute_force_truth_table(back) != brute_force_truth_table(c)) return "parse/serialize changed the truth table";
        const CompiledCircuit compiled(c);
        std::vector<std::uint8_t> x(8);
        for (std::uint64_t a = 0; a < 256; ++a) {
            for (std::size_t i = 0; i < 8; ++i) x[i] = (a >> i) & 1U;
            if (compiled(a) != eval_on_assignment(c, x)) return "compiled evaluator disagrees at " + std::to_string(a);
        }
        return {};
    }));

    report.modules.push_back(run_module("transforms", cases, [&](int t) -> std::string {
        Rng rng = root.derive("transforms", static_cast<std::uint64_t>(t));
        const Circuit c = random_two_layer(10, 3, t % 2 == 0 ? GateKind::And : GateKind::Or, BottomMix::Both, 5, 9, rng);
        const auto gate = collapse_to_single_gate(c);
        if (!gate) return "AND/OR tree was not collapsed";
        if (batch_eval(*gate, 10) != brute_force_truth_table(c)) return "collapsed gate differs from the circuit";
        const auto copies = expand_copies(c, 2);
        const TruthTable full = brute_force_truth_table(c);
        for (std::size_t j = 0; j < copies.size(); ++j) {
            const TruthTable part = brute_force_truth_table(copies[j]);
            for (std::uint64_t y = 0; y < part.size(); ++y)
                if (part.get(y) != full.get(j + (y << 2))) return "copy " + std::to_string(j) + " differs";
        }
        return {};
    }));

    report.modules.push_back(run_module("symrank", cases, [&](int t) -> std::string {
        Rng rng = root.derive("symrank", static_cast<std::uint64_t>(t));
        const Circuit c = random_symsym(10, 40, rng);
        const SymSymCircuit s = lower_to_symsym(c);
        SymRankDecomp d = decompose(s);
        if (options.corrupt_filter) {
            // Flip the entry read at (0, 0) so the corruption is always visible.
            std::size_t count = 0;
            for (const auto k : d.a_rows[0])
                if (std::find(d.b_cols[0].begin(), d.b_cols[0].end(), k) != d.b_cols[0].end()) ++count;
            d.filter[count] ^= 1U;
        }
        const TruthTable want = brute_force_truth_table(c);
        const std::size_t rows = std::size_t{1} << d.left_bits;
        for (std::uint64_t x = 0; x < want.size(); ++x)
            if (reconstruct_entry(d, x % rows, x / rows) != want.get(x))
                return "reconstruction differs at assignment " + std::to_string(x);
        return {};
    }));

    report.modules.push_back(run_module("rectmm", cases, [&](int t) -> std::string {
        if (t == 0 && !verify_base_identity()) return "base identity does not expand correctly";
        Rng rng = root.derive("rectmm", static_cast<std::uint64_t>(t));
        const PrimeField f(t % 2 == 0 ? PrimeField::kMersenne61 : PrimeField::kMersenne31);
        const int m = 1 + t % 3;
        const FieldMatrix a = pattern_matrix(f, m, true, rng);
        const FieldMatrix b = pattern_matrix(f, m, false, rng);
        if (structured_sparse_mm(f, a, b, m) != naive_mm(f, a, b)) return "structured product differs at M=" + std::to_string(m);
        if (t < 2) {
            const CoppersmithPlan plan(f, 5);
            const FieldMatrix x = random_matrix(f, plan.wide(), plan.embedded(), rng());
            const FieldMatrix y = random_matrix(f, plan.embedded(), plan.narrow(), rng());
            if (algorithm1(plan, x, y) != naive_mm(f, x, y)) return "algorithm1 differs from the naive product";
        }
        return {};
    }));

    report.modules.push_back(run_module("evaluator", cases, [&](int t) -> std::string {
        Rng rng = root.derive("evaluator", static_cast<std::uint64_t>(t));
        const Circuit c = random_symsym(10, 50, rng);
        const TruthTable want = brute_force_truth_table(c);
        for (const auto m : {EvalMethod::SymrankNaiveMm, EvalMethod::DirectOuterSum}) {
            EvalPlan plan;
            plan.method = m;
            if (eval_all_symsym(lower_to_symsym(c), plan) != want) return std::string(method_name(m)) + " differs";
        }
        const Circuit counted = random_two_layer(10, 3, t % 2 == 0 ? GateKind::Sym : GateKind::And, BottomMix::Both, 5, 9, rng);
        CountOptions opts;
        opts.ell = 1 + t % 2;
        if (count_sat_split(counted, opts).count != brute_force_count_sat(counted)) return "count differs";
        return {};
    }));

    report.modules.push_back(run_module("depth2", cases, [&](int t) -> std::string {
        Rng rng = root.derive("depth2", static_cast<std::uint64_t>(t));
        WtpInstance inst;
        inst.left = IntMatrix(12, 4);
        inst.right = IntMatrix(4, 12);
        for (auto& v : inst.left.values) v = rng.uniform(-20, 20);
        for (auto& v : inst.right.values) v = rng.uniform(-20, 20);
        for (int k = 0; k < 4; ++k) inst.weights.emplace_back(rng.uniform(-1000, 1000));
        Depth2Params params;
        params.capacity = 1 + static_cast<std::size_t>(t % 5);
        if (weighted_threshold_product(inst, params) != circledast_naive(inst)) return "bucketed product differs";
        return {};
    }));

    report.modules.push_back(run_module("ilp", cases, [&](int t) -> std::string {
        Rng rng = root.derive("ilp", static_cast<std::uint64_t>(t));
        IlpInstance inst;
        inst.n = 8;
        std::vector<BigInt> c;
        for (int i = 0; i < inst.n; ++i) c.emplace_back(rng.uniform(-50, 50));
        inst.objective = std::move(c);
        for (int j = 0; j < 3; ++j) {
            IlpConstraint con;
            for (int i = 0; i < inst.n; ++i) con.a.emplace_back(rng.uniform(-50, 50));
            con.b = rng.uniform(-50, 50);
            inst.constraints.push_back(std::move(con));
        }
        inst.validate();
        IlpSolveParams params;
        params.k = 2;
        params.seed = rng();
        const IlpResult got = optimize(inst, params);
        const IlpResult want = brute_force_ilp(inst);
        if (got.status != want.status || got.value != want.value) return "optimum differs from exhaustive search";
        return {};
    }));

    return report;
}

void print(std::ostream& out, const SelfcheckReport& report) {
    for (const auto& m : report.modules) {
        out << "module=" << m.module << " status=" << (m.passed ? "pass" : "fail") << " cases=" << m.cases
            << " failures=" << m.failures;
        if (!m.detail.empty()) out << " detail=\"" << m.detail << '"';
        out << '\n';
    }
    out << "selfcheck=" << (report.passed() ? "pass" : "fail") << '\n';
}

}  // namespace accthr
