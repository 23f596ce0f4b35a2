#include "accthr/caps.hpp"
#include "accthr/circuit.hpp"
#include "accthr/depth2.hpp"
#include "accthr/errors.hpp"
#include "accthr/evaluator.hpp"
#include "accthr/field.hpp"
#include "accthr/ilp.hpp"
#include "accthr/rectmm.hpp"
#include "accthr/selfcheck.hpp"
#include "accthr/symrank.hpp"
#include "accthr/transforms.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

using namespace accthr;

enum ExitCode { kOk = 0, kSelfcheckFailed = 1, kUsage = 2, kInput = 3, kCap = 4 };

// Thrown for unreadable or unwritable files.
class FileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write '" + path + "'");
    return out;
}

Circuit load_circuit(const std::string& path) { return parse_circuit(read_file(path)); }

// One machine-readable line of key=value pairs in insertion order.
class Summary {
public:
    template <typename T>
    Summary& add(const std::string& key, const T& value) {
        std::ostringstream s;
        s << value;
        fields_.emplace_back(key, s.str());
        return *this;
    }
    Summary& add(const std::string& key, bool value) { return add(key, std::string(value ? "true" : "false")); }
    void print() const {
        for (std::size_t i = 0; i < fields_.size(); ++i)
            std::cout << (i == 0 ? "" : " ") << fields_[i].first << '=' << fields_[i].second;
        std::cout << '\n';
    }

private:
    std::vector<std::pair<std::string, std::string>> fields_;
};

struct GlobalConfig {
    std::uint64_t seed = 0;
    unsigned threads = 1;
    bool no_fallback = false;
    Caps caps;
};

// Method names accepted on the command line, including short aliases.
EvalMethod method_from_flag(const std::string& name) {
    static const std::map<std::string, EvalMethod> aliases{{"symrank", EvalMethod::SymrankNaiveMm},
                                                           {"coppersmith", EvalMethod::SymrankCoppersmith},
                                                           {"direct", EvalMethod::DirectOuterSum},
                                                           {"naive", EvalMethod::Oracle}};
    if (const auto it = aliases.find(name); it != aliases.end()) return it->second;
    return parse_method(name);
}

const std::vector<std::string> kMethodNames{"symrank",          "symrank-naive-mm", "symrank-coppersmith", "coppersmith",
                                            "direct",           "direct-outer-sum", "oracle",              "naive"};

EvalPlan make_plan(const GlobalConfig& g, EvalMethod method) {
    EvalPlan plan;
    plan.method = method;
    plan.rank_cap = g.caps.rank;
    plan.fallback = !g.no_fallback;
    plan.oracle_limit = g.caps.oracle_inputs;
    return plan;
}

CountOptions make_count_options(const GlobalConfig& g) {
    CountOptions o;
    o.seed = g.seed;
    o.oracle_fallback = !g.no_fallback;
    o.monomial_cap = g.caps.monomials;
    o.weight_bits = g.caps.weight_bits;
    o.copy_bits = g.caps.copy_bits;
    return o;
}

// ---------------------------------------------------------------- eval-all

struct EvalAllArgs {
    std::string circuit;
    std::string out;
    std::string method = "symrank";
    std::string dump;
};

int run_eval_all(const GlobalConfig& g, const EvalAllArgs& a) {
    const Circuit c = load_circuit(a.circuit);
    const EvalMethod requested = method_from_flag(a.method);
    Summary s;
    s.add("command", "eval-all").add("n", c.inputs()).add("requested", method_name(requested));
    TruthTable table;
    std::string fallback = "none";
    EvalStats stats;
    if (requested == EvalMethod::Oracle) {
        table = brute_force_truth_table(c, g.caps.oracle_inputs, g.threads);
    } else {
        std::optional<SymSymCircuit> lowered;
        try {
            lowered = lower_to_symsym(c, g.caps.weight_bits);
        } catch (const ShapeError&) {
            if (g.no_fallback) throw;
            fallback = "oracle-shape";
        }
        if (lowered) {
            table = eval_all_symsym(*lowered, make_plan(g, requested), &stats);
            if (stats.used != requested) fallback = std::string(method_name(stats.used));
            if (!a.dump.empty()) {
                auto out = open_output(a.dump);
                dump(out, decompose(*lowered, g.caps.rank));
            }
        } else {
            table = brute_force_truth_table(c, g.caps.oracle_inputs, g.threads);
        }
    }
    if (!a.out.empty()) {
        auto out = open_output(a.out);
        const auto bytes = table.bits().to_bytes();
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    }
    s.add("method", fallback == "oracle-shape" ? std::string("oracle") : std::string(method_name(stats.used)))
        .add("fallback", fallback)
        .add("rank", stats.rank)
        .add("multiplications", stats.multiplications)
        .add("satisfying", table.count());
    if (!a.out.empty()) s.add("out", a.out);
    s.print();
    return kOk;
}

// ---------------------------------------------------------------- count-sat

struct CountArgs {
    std::string circuit;
    int ell = 0;
    int repeats = 25;
    bool force_randomized = false;
    std::string method = "symrank";
};

int run_count(const GlobalConfig& g, const CountArgs& a) {
    const Circuit c = load_circuit(a.circuit);
    CountOptions o = make_count_options(g);
    o.ell = a.ell;
    o.repetitions = a.repeats;
    o.force_randomized = a.force_randomized;
    const CountReport r = count_sat_split(c, o, make_plan(g, method_from_flag(a.method)));
    Summary()
        .add("command", "count-sat")
        .add("n", c.inputs())
        .add("count", r.count)
        .add("path", path_name(r.path))
        .add("ell", r.ell)
        .add("max_rank", r.max_rank)
        .add("fallback", std::string(r.path == CountPath::Oracle ? "oracle" : "none"))
        .add("seed", g.seed)
        .add("repeats", a.repeats)
        .print();
    return kOk;
}

// ---------------------------------------------------------------- equiv

struct EquivArgs {
    std::string a;
    std::string b;
    bool anti = false;
    std::string method = "symrank";
};

int run_equiv(const GlobalConfig& g, const EquivArgs& a) {
    const Circuit lhs = load_circuit(a.a);
    const Circuit rhs = load_circuit(a.b);
    const CountOptions o = make_count_options(g);
    const EvalPlan plan = make_plan(g, method_from_flag(a.method));
    Summary s;
    s.add("command", "equiv").add("n", lhs.inputs());
    if (a.anti)
        s.add("antiequivalent", antiequiv_via_count(lhs, rhs, o, plan));
    else
        s.add("equivalent", equiv_via_count(lhs, rhs, o, plan));
    s.add("seed", g.seed).print();
    return kOk;
}

// ---------------------------------------------------------------- ilp

struct IlpArgs {
    std::string instance;
    int k = 0;
    int repeats = 25;
    bool witness = false;
    std::string route = "factored";
    std::string decision = "auto";
    std::string method = "direct";
};

int run_ilp(const GlobalConfig& g, const IlpArgs& a) {
    const IlpInstance inst = parse_ilp(read_file(a.instance));
    IlpSolveParams p;
    p.k = a.k;
    p.repeats = a.repeats;
    p.seed = g.seed;
    p.witness = a.witness;
    p.route = a.route == "literal" ? IlpRoute::Literal : IlpRoute::Factored;
    p.decision = a.decision == "majority"     ? IlpDecision::Majority
                 : a.decision == "any-repeat" ? IlpDecision::AnyRepeat
                                              : IlpDecision::Auto;
    p.method = method_from_flag(a.method);
    p.oracle_fallback = !g.no_fallback;
    p.caps = g.caps;
    const IlpResult r = optimize(inst, p);
    Summary s;
    s.add("command", "ilp").add("n", inst.n).add("constraints", inst.constraints.size()).add("status", status_name(r.status));
    if (r.value) s.add("value", to_string(*r.value));
    std::string applied = "none";
    if (!r.diagnostics.search_calls.empty()) applied = std::string(decision_name(r.diagnostics.search_calls.back().decision));
    s.add("k", r.diagnostics.k)
        .add("repeats", a.repeats)
        .add("seed", g.seed)
        .add("calls", r.diagnostics.search_calls.size())
        .add("witness_calls", r.diagnostics.witness_calls)
        .add("decision", applied)
        .add("fallback", std::string(r.diagnostics.oracle_fallback ? "oracle" : "none"));
    if (r.witness) {
        std::string bits;
        for (const auto b : *r.witness) bits.push_back(b != 0 ? '1' : '0');
        s.add("witness", bits);
    } else if (a.witness && r.status != IlpStatus::Infeasible) {
        s.add("witness", "rejected");
    }
    s.print();
    return kOk;
}

// ---------------------------------------------------------------- thr2

struct Thr2Args {
    std::string circuit;
    std::string left;
    std::string right;
    std::string out;
    std::string mode = "naive";
    std::size_t capacity = 0;
};

int run_thr2(const GlobalConfig&, const Thr2Args& a) {
    const Circuit c = load_circuit(a.circuit);
    if (c.inputs() % 2 != 0) throw InvalidInput("thr2 needs an even number of inputs");
    RectInput rect;
    rect.k = c.inputs() / 2;
    {
        std::ifstream l(a.left);
        if (!l) throw FileError("cannot open '" + a.left + "'");
        rect.left = read_rect_side(l, rect.k);
        std::ifstream r(a.right);
        if (!r) throw FileError("cannot open '" + a.right + "'");
        rect.right = read_rect_side(r, rect.k);
    }
    Depth2Params params;
    params.mode = a.mode == "coppersmith" ? MmMode::Coppersmith : MmMode::Naive;
    params.capacity = a.capacity;
    if (!c.output().from_gate) throw ShapeError("thr2 needs a gate at the output");
    const GateKind top = c.gates()[c.output().index].kind;
    const bool threshold_top = top == GateKind::Thr;
    const BitMatrix m = threshold_top ? eval_thrthr_rectangle(c, rect, params) : eval_symthr_rectangle(c, rect, params);
    if (!a.out.empty()) {
        auto out = open_output(a.out);
        write_bit_matrix(out, m, rect.k);
    }
    Summary()
        .add("command", "thr2")
        .add("k", rect.k)
        .add("rows", m.rows())
        .add("cols", m.cols())
        .add("shape", std::string(threshold_top ? "thr-thr" : "sym-thr"))
        .add("mode", a.mode)
        .add("ones", m.bits().popcount())
        .print();
    return kOk;
}

// ---------------------------------------------------------------- mm

struct MmArgs {
    std::string a;
    std::string b;
    std::string out;
    std::string mode = "naive";
    bool count_ops = false;
    bool no_alpha_check = false;
};

int run_mm(const GlobalConfig&, const MmArgs& args) {
    std::istringstream a_text(read_file(args.a));
    std::istringstream b_text(read_file(args.b));
    const MatFile a = read_mat(a_text);
    const MatFile b = read_mat(b_text);
    if (a.modulus != b.modulus) throw InvalidInput("matrices use different moduli");
    if (a.matrix.cols() != b.matrix.rows()) throw InvalidInput("inner dimensions differ");
    const PrimeField f(a.modulus);
    OpCounter ops;
    FieldMatrix c;
    if (args.mode == "coppersmith") {
        CoppersmithParams p;
        p.enforce_alpha = !args.no_alpha_check;
        c = coppersmith_rect_mm(f, a.matrix, b.matrix, p, &ops);
    } else {
        c = naive_mm(f, a.matrix, b.matrix, &ops);
    }
    if (!args.out.empty()) {
        auto out = open_output(args.out);
        write_mat(out, c, a.modulus);
    }
    Summary s;
    s.add("command", "mm").add("mode", args.mode).add("rows", c.rows()).add("inner", a.matrix.cols()).add("cols", c.cols());
    if (args.count_ops) s.add("multiplications", ops.multiplications);
    s.print();
    return kOk;
}

// ---------------------------------------------------------------- selfcheck

struct SelfcheckArgs {
    int cases = 8;
    bool inject_filter_fault = false;
};

int run_selfcheck_command(const GlobalConfig& g, const SelfcheckArgs& a) {
    SelfcheckOptions o;
    o.seed = g.seed == 0 ? 1 : g.seed;
    o.cases = a.cases;
    o.corrupt_filter = a.inject_filter_fault;
    const SelfcheckReport r = run_selfcheck(o);
    print(std::cout, r);
    return r.passed() ? kOk : kSelfcheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Batch evaluation, counting and equivalence for threshold and symmetric circuits, "
                 "0-1 integer programming and rectangular matrix multiplication."};
    app.require_subcommand(1);
    GlobalConfig g;
    try {
        g.caps = Caps::from_environment();
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    app.add_option("--seed", g.seed, "Seed for randomized steps (0 is the fixed default)");
    app.add_option("--threads", g.threads, "Worker threads for the brute-force oracle")->check(CLI::PositiveNumber);
    app.add_flag("--no-fallback", g.no_fallback, "Fail with status 4 instead of falling back when a cap is hit");
    app.add_option("--oracle-n", g.caps.oracle_inputs, "Largest input count for brute force (env ACCTHR_ORACLE_N)")
        ->check(CLI::PositiveNumber);
    app.add_option("--rank-cap", g.caps.rank, "Symmetric-rank cap (env ACCTHR_RANK_CAP)")->check(CLI::PositiveNumber);
    app.add_option("--monomial-cap", g.caps.monomials, "Monomial cap for polynomials (env ACCTHR_MONOMIAL_CAP)")
        ->check(CLI::PositiveNumber);
    app.add_option("--weight-bits", g.caps.weight_bits, "Bound on log2 of summed weights (env ACCTHR_WEIGHT_BITS)")
        ->check(CLI::PositiveNumber);
    app.add_option("--copy-bits", g.caps.copy_bits, "Bound on log2 of copy counts (env ACCTHR_COPY_BITS)")
        ->check(CLI::PositiveNumber);
    app.fallthrough();

    EvalAllArgs eval_args;
    auto* eval = app.add_subcommand("eval-all", "Truth table of a circuit on all inputs");
    eval->add_option("--circuit", eval_args.circuit, ".ckt netlist")->required();
    eval->add_option("--out", eval_args.out, "Truth-table bitmap output (LSB-first bytes)");
    eval->add_option("--method", eval_args.method, "Evaluation method")->check(CLI::IsMember(kMethodNames));
    eval->add_option("--dump-decomposition", eval_args.dump, "Write the symmetric-rank decomposition as text");

    CountArgs count_args;
    auto* count = app.add_subcommand("count-sat", "Number of satisfying assignments");
    count->add_option("--circuit", count_args.circuit, ".ckt netlist")->required();
    count->add_option("--ell", count_args.ell, "Bit-extractor parameter (0 picks the default)");
    count->add_option("--repeats", count_args.repeats, "Polynomial samples on the randomized path")
        ->check(CLI::PositiveNumber);
    count->add_flag("--force-randomized", count_args.force_randomized, "Use the randomized polynomial path");
    count->add_option("--method", count_args.method, "Batch evaluation method")->check(CLI::IsMember(kMethodNames));

    EquivArgs equiv_args;
    auto* equiv = app.add_subcommand("equiv", "Equivalence of two circuits by counting");
    equiv->add_option("--a", equiv_args.a, "First circuit")->required();
    equiv->add_option("--b", equiv_args.b, "Second circuit")->required();
    equiv->add_flag("--anti", equiv_args.anti, "Test whether a equals the negation of b");
    equiv->add_option("--method", equiv_args.method, "Batch evaluation method")->check(CLI::IsMember(kMethodNames));

    IlpArgs ilp_args;
    auto* ilp = app.add_subcommand("ilp", "Solve a 0-1 integer linear program");
    ilp->add_option("instance", ilp_args.instance, ".ilp instance")->required();
    ilp->add_option("--k", ilp_args.k, "Copy parameter (0 picks the default)")->check(CLI::NonNegativeNumber);
    ilp->add_option("--repeats", ilp_args.repeats, "Repeats per feasibility call")->check(CLI::PositiveNumber);
    ilp->add_flag("--witness", ilp_args.witness, "Recover an optimal assignment by self-reduction");
    ilp->add_option("--route", ilp_args.route, "Pipeline order")->check(CLI::IsMember({"factored", "literal"}));
    ilp->add_option("--decision", ilp_args.decision, "How repeats are merged")
        ->check(CLI::IsMember({"auto", "majority", "any-repeat"}));
    ilp->add_option("--method", ilp_args.method, "Batch evaluation method")->check(CLI::IsMember(kMethodNames));

    Thr2Args thr2_args;
    auto* thr2 = app.add_subcommand("thr2", "Depth-two threshold circuit on a rectangle of inputs");
    thr2->add_option("--circuit", thr2_args.circuit, ".ckt netlist with 2k inputs")->required();
    thr2->add_option("--left", thr2_args.left, "First-half assignments, one k-bit string per line")
        ->required();
    thr2->add_option("--right", thr2_args.right, "Second-half assignments")->required();
    thr2->add_option("--out", thr2_args.out, "Output bit matrix");
    thr2->add_option("--mode", thr2_args.mode, "Matrix product")->check(CLI::IsMember({"naive", "coppersmith"}));
    thr2->add_option("--capacity", thr2_args.capacity, "Bucket capacity (0 picks the default)");

    MmArgs mm_args;
    auto* mm = app.add_subcommand("mm", "Matrix product over a prime field");
    mm->add_option("--a", mm_args.a, "Left .mat")->required();
    mm->add_option("--b", mm_args.b, "Right .mat")->required();
    mm->add_option("--out", mm_args.out, "Product .mat");
    mm->add_option("--mode", mm_args.mode, "Engine")->check(CLI::IsMember({"naive", "coppersmith"}));
    mm->add_flag("--count-ops", mm_args.count_ops, "Report base-field multiplications");
    mm->add_flag("--no-alpha-check", mm_args.no_alpha_check, "Allow inner dimensions above N^0.172");

    SelfcheckArgs self_args;
    auto* self = app.add_subcommand("selfcheck", "Oracle-equivalence suite on small instances");
    self->add_option("--cases", self_args.cases, "Random cases per module")->check(CLI::PositiveNumber);
    self->add_flag("--inject-filter-fault", self_args.inject_filter_fault, "Corrupt symmetric-rank filters (test hook)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*eval) return run_eval_all(g, eval_args);
        if (*count) return run_count(g, count_args);
        if (*equiv) return run_equiv(g, equiv_args);
        if (*ilp) return run_ilp(g, ilp_args);
        if (*thr2) return run_thr2(g, thr2_args);
        if (*mm) return run_mm(g, mm_args);
        if (*self) return run_selfcheck_command(g, self_args);
    } catch (const CapExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kCap;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    } catch (const FileError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    } catch (const std::invalid_argument& e) {  // InvalidInput, ShapeError
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    }
    return kUsage;
}
