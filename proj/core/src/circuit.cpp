#include "accthr/circuit.hpp"

#include "accthr/errors.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace accthr {

std::string_view kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::And: return "AND";
        case GateKind::Or: return "OR";
        case GateKind::Not: return "NOT";
        case GateKind::Xor: return "XOR";
        case GateKind::Mod: return "MOD";
        case GateKind::Maj: return "MAJ";
        case GateKind::Thr: return "THR";
        case GateKind::Sym: return "SYM";
    }
    return "?";
}

Gate Gate::basic(std::string id, GateKind kind, std::vector<WireRef> inputs) {
    Gate g;
    g.id = std::move(id);
    g.kind = kind;
    g.inputs = std::move(inputs);
    return g;
}

Gate Gate::mod(std::string id, std::uint32_t m, std::vector<WireRef> inputs) {
    Gate g = basic(std::move(id), GateKind::Mod, std::move(inputs));
    g.modulus = m;
    return g;
}

Gate Gate::thr(std::string id, std::vector<WireRef> inputs, std::vector<BigInt> weights, BigInt threshold) {
    Gate g = basic(std::move(id), GateKind::Thr, std::move(inputs));
    g.weights = std::move(weights);
    g.threshold = std::move(threshold);
    return g;
}

Gate Gate::sym(std::string id, std::vector<WireRef> inputs, std::vector<std::uint8_t> table) {
    Gate g = basic(std::move(id), GateKind::Sym, std::move(inputs));
    g.table = std::move(table);
    return g;
}

std::uint64_t Gate::fan_in() const {
    std::uint64_t total = 0;
    for (const auto& w : inputs) total += w.multiplicity;
    return total;
}

bool is_symmetric_kind(GateKind kind) {
    return kind == GateKind::And || kind == GateKind::Or || kind == GateKind::Xor || kind == GateKind::Mod ||
           kind == GateKind::Maj || kind == GateKind::Sym;
}

bool is_threshold_kind(GateKind kind) {
    return kind == GateKind::Thr || kind == GateKind::Maj || kind == GateKind::And || kind == GateKind::Or;
}

std::vector<std::uint8_t> symmetric_table(const Gate& g) {
    const std::uint64_t m = g.fan_in();
    if (g.kind == GateKind::Sym) return g.table;
    std::vector<std::uint8_t> t(m + 1, 0);
    for (std::uint64_t c = 0; c <= m; ++c) {
        bool v = false;
        switch (g.kind) {
            case GateKind::And: v = c == m; break;
            case GateKind::Or: v = c >= 1; break;
            case GateKind::Xor: v = (c & 1U) != 0; break;
            case GateKind::Mod: v = c % g.modulus == 0; break;
            case GateKind::Maj: v = 2 * c > m; break;
            default: throw InvalidInput("gate '" + g.id + "' is not symmetric");
        }
        t[c] = v ? 1 : 0;
    }
    return t;
}

ThresholdForm threshold_form(const Gate& g) {
    ThresholdForm form;
    const std::uint64_t m = g.fan_in();
    switch (g.kind) {
        case GateKind::Thr:
            form.weights = g.weights;
            form.threshold = g.threshold;
            return form;
        case GateKind::And: form.threshold = m; break;
        case GateKind::Or: form.threshold = 1; break;
        case GateKind::Maj: form.threshold = m / 2 + 1; break;
        default: throw InvalidInput("gate '" + g.id + "' is not a threshold gate");
    }
    form.weights.assign(g.inputs.size(), BigInt(1));
    return form;
}

namespace {

bool is_input_token(std::string_view id) {
    if (id.size() < 2 || id[0] != 'x') return false;
    return std::all_of(id.begin() + 1, id.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
}

bool valid_gate_id(std::string_view id) {
    if (id.empty() || is_input_token(id) || id[0] == '~') return false;
    return std::none_of(id.begin(), id.end(), [](char ch) {
        return ch == '*' || ch == '@' || ch == '#' || ch == ' ' || ch == '\t' || ch == '\r';
    });
}

void check_gate_shape(const Gate& g) {
    switch (g.kind) {
        case GateKind::Thr:
            if (g.weights.size() != g.inputs.size())
                throw InvalidInput("THR weight arity mismatch in gate '" + g.id + "'");
            break;
        case GateKind::Sym:
            if (g.table.size() != g.fan_in() + 1)
                throw InvalidInput("SYM table length " + std::to_string(g.table.size()) + " != " +
                                   std::to_string(g.fan_in() + 1) + " in gate '" + g.id + "'");
            for (auto b : g.table)
                if (b > 1) throw InvalidInput("SYM table entries must be 0/1 in gate '" + g.id + "'");
            break;
        case GateKind::Mod:
            if (g.modulus < 2) throw InvalidInput("MOD modulus must be at least 2 in gate '" + g.id + "'");
            break;
        case GateKind::Not:
            if (g.inputs.size() != 1 || g.inputs[0].multiplicity != 1)
                throw InvalidInput("NOT gate '" + g.id + "' needs exactly one wire");
            break;
        default: break;
    }
    for (const auto& w : g.inputs)
        if (w.multiplicity == 0) throw InvalidInput("zero multiplicity in gate '" + g.id + "'");
}

}  // namespace

Circuit::Circuit(int inputs, std::vector<Gate> gates, WireRef output) : n_(inputs) {
    if (inputs < 0) throw InvalidInput("negative input count");
    std::unordered_map<std::string, std::size_t> seen;
    std::vector<std::optional<WireRef>> folded(gates.size());
    std::vector<std::size_t> new_index(gates.size(), 0);

    auto resolve = [&](WireRef w, std::size_t limit, const std::string& where) {
        if (w.multiplicity == 0) throw InvalidInput("zero multiplicity in " + where);
        if (!w.from_gate) {
            if (w.index >= static_cast<std::size_t>(n_))
                throw InvalidInput("input x" + std::to_string(w.index + 1) + " out of range in " + where);
            return w;
        }
        if (w.index >= limit) throw InvalidInput("dangling gate reference in " + where);
        if (folded[w.index]) {
            WireRef r = *folded[w.index];
            r.negated = r.negated != w.negated;
            r.multiplicity = w.multiplicity;
            return r;
        }
        w.index = new_index[w.index];
        return w;
    };

    for (std::size_t g = 0; g < gates.size(); ++g) {
        Gate& gate = gates[g];
        if (!valid_gate_id(gate.id)) throw InvalidInput("invalid gate id '" + gate.id + "'");
        if (!seen.emplace(gate.id, g).second) throw InvalidInput("duplicate gate id '" + gate.id + "'");
        check_gate_shape(gate);
        for (auto& w : gate.inputs) w = resolve(w, g, "gate '" + gate.id + "'");
        if (gate.kind == GateKind::Not) {
            WireRef r = gate.inputs[0];
            r.negated = !r.negated;
            folded[g] = r;
            continue;
        }
        new_index[g] = gates_.size();
        gates_.push_back(std::move(gate));
    }
    output.multiplicity = 1;
    output_ = resolve(output, gates.size(), "output");
}

std::vector<bool> Circuit::reachable() const {
    std::vector<bool> mark(gates_.size(), false);
    if (output_.from_gate) mark[output_.index] = true;
    for (std::size_t g = gates_.size(); g-- > 0;) {
        if (!mark[g]) continue;
        for (const auto& w : gates_[g].inputs)
            if (w.from_gate) mark[w.index] = true;
    }
    return mark;
}

// ---------------------------------------------------------------- parsing

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

template <typename T>
std::optional<T> parse_unsigned(std::string_view s) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<GateKind> parse_kind(std::string_view s) {
    std::string up(s);
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char ch) { return std::toupper(ch); });
    static const std::map<std::string, GateKind, std::less<>> kinds = {
        {"AND", GateKind::And}, {"OR", GateKind::Or},   {"NOT", GateKind::Not}, {"XOR", GateKind::Xor},
        {"MOD", GateKind::Mod}, {"MAJ", GateKind::Maj}, {"THR", GateKind::Thr}, {"SYM", GateKind::Sym}};
    const auto it = kinds.find(up);
    if (it == kinds.end()) return std::nullopt;
    return it->second;
}

struct ParseState {
    std::optional<int> n;
    std::vector<Gate> gates;
    std::unordered_map<std::string, std::size_t> ids;
};

WireRef parse_wire(std::string_view tok, const ParseState& st, std::size_t line, bool allow_mult = true) {
    WireRef w;
    if (!tok.empty() && tok[0] == '~') {
        w.negated = true;
        tok.remove_prefix(1);
    }
    if (const auto star = tok.find('*'); star != std::string_view::npos) {
        if (!allow_mult) throw ParseError(line, "multiplicity not allowed here");
        const auto m = parse_unsigned<std::uint32_t>(tok.substr(star + 1));
        if (!m || *m == 0) throw ParseError(line, "bad multiplicity in wire '" + std::string(tok) + "'");
        w.multiplicity = *m;
        tok = tok.substr(0, star);
    }
    if (tok.empty()) throw ParseError(line, "empty wire token");
    if (is_input_token(tok)) {
        const auto k = parse_unsigned<std::size_t>(tok.substr(1));
        if (!k || *k == 0 || *k > static_cast<std::size_t>(*st.n))
            throw ParseError(line, "input '" + std::string(tok) + "' out of range");
        w.index = *k - 1;
        return w;
    }
    const auto it = st.ids.find(std::string(tok));
    if (it == st.ids.end()) throw ParseError(line, "dangling reference to '" + std::string(tok) + "'");
    w.from_gate = true;
    w.index = it->second;
    return w;
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
    ParseState st;
    std::optional<WireRef> output;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto tok = split_ws(line);
        if (tok.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (tok[0] == "inputs") {
            if (st.n) throw ParseError(line_no, "duplicate 'inputs' line");
            if (tok.size() != 2) throw ParseError(line_no, "expected 'inputs <n>'");
            const auto n = parse_unsigned<int>(tok[1]);
            if (!n) throw ParseError(line_no, "bad input count");
            st.n = *n;
        } else if (tok[0] == "gate") {
            if (!st.n) throw ParseError(line_no, "'gate' before 'inputs'");
            if (output) throw ParseError(line_no, "'gate' after 'output'");
            if (tok.size() < 3) throw ParseError(line_no, "expected 'gate <id> <KIND> ...'");
            Gate g;
            g.id = std::string(tok[1]);
            if (!valid_gate_id(g.id)) throw ParseError(line_no, "invalid gate id '" + g.id + "'");
            if (st.ids.count(g.id)) throw ParseError(line_no, "duplicate gate id '" + g.id + "'");
            const auto kind = parse_kind(tok[2]);
            if (!kind) throw ParseError(line_no, "unknown gate kind '" + std::string(tok[2]) + "'");
            g.kind = *kind;
            std::size_t first_wire = 3;
            if (g.kind == GateKind::Thr) {
                if (tok.size() < 4) throw ParseError(line_no, "THR gate needs a threshold");
                try {
                    g.threshold = parse_bigint(tok[3]);
                } catch (const std::invalid_argument& e) {
                    throw ParseError(line_no, e.what());
                }
                for (std::size_t i = 4; i < tok.size(); ++i) {
                    const auto at = tok[i].find('@');
                    if (at == std::string_view::npos || at == 0 || at + 1 == tok[i].size())
                        throw ParseError(line_no, "THR weight arity mismatch at '" + std::string(tok[i]) + "'");
                    try {
                        g.weights.push_back(parse_bigint(tok[i].substr(0, at)));
                    } catch (const std::invalid_argument& e) {
                        throw ParseError(line_no, e.what());
                    }
                    g.inputs.push_back(parse_wire(tok[i].substr(at + 1), st, line_no));
                }
                first_wire = tok.size();
            } else if (g.kind == GateKind::Sym) {
                if (tok.size() < 4) throw ParseError(line_no, "SYM gate needs a table");
                for (const char ch : tok[3]) {
                    if (ch != '0' && ch != '1') throw ParseError(line_no, "SYM table must be a bit string");
                    g.table.push_back(ch == '1' ? 1 : 0);
                }
                first_wire = 4;
            } else if (g.kind == GateKind::Mod) {
                if (tok.size() < 4) throw ParseError(line_no, "MOD gate needs a modulus");
                const auto m = parse_unsigned<std::uint32_t>(tok[3]);
                if (!m || *m < 2) throw ParseError(line_no, "MOD modulus must be an integer >= 2");
                g.modulus = *m;
                first_wire = 4;
            }
            for (std::size_t i = first_wire; i < tok.size(); ++i) g.inputs.push_back(parse_wire(tok[i], st, line_no));
            try {
                check_gate_shape(g);
            } catch (const InvalidInput& e) {
                throw ParseError(line_no, e.what());
            }
            st.ids.emplace(g.id, st.gates.size());
            st.gates.push_back(std::move(g));
        } else if (tok[0] == "output") {
            if (!st.n) throw ParseError(line_no, "'output' before 'inputs'");
            if (output) throw ParseError(line_no, "duplicate 'output' line");
            if (tok.size() != 2) throw ParseError(line_no, "expected 'output <wire>'");
            output = parse_wire(tok[1], st, line_no, false);
        } else {
            throw ParseError(line_no, "unknown directive '" + std::string(tok[0]) + "'");
        }
        if (end == text.size()) break;
    }
    if (!st.n) throw ParseError(line_no, "missing 'inputs' line");
    if (!output) throw ParseError(line_no, "missing 'output' line");
    return Circuit(*st.n, std::move(st.gates), *output);
}

namespace {

std::string wire_text(const Circuit& c, const WireRef& w) {
    std::string s = w.negated ? "~" : "";
    s += w.from_gate ? c.gates()[w.index].id : "x" + std::to_string(w.index + 1);
    if (w.multiplicity > 1) s += "*" + std::to_string(w.multiplicity);
    return s;
}

}  // namespace

std::string serialize(const Circuit& c) {
    std::ostringstream out;
    out << "inputs " << c.inputs() << '\n';
    for (const auto& g : c.gates()) {
        out << "gate " << g.id << ' ' << kind_name(g.kind);
        if (g.kind == GateKind::Thr) {
            out << ' ' << g.threshold;
            for (std::size_t i = 0; i < g.inputs.size(); ++i) out << ' ' << g.weights[i] << '@' << wire_text(c, g.inputs[i]);
        } else {
            if (g.kind == GateKind::Sym) {
                out << ' ';
                for (auto b : g.table) out << static_cast<char>('0' + b);
            } else if (g.kind == GateKind::Mod) {
                out << ' ' << g.modulus;
            }
            for (const auto& w : g.inputs) out << ' ' << wire_text(c, w);
        }
        out << '\n';
    }
    out << "output " << wire_text(c, c.output()) << '\n';
    return out.str();
}

// ---------------------------------------------------------------- evaluation

CompiledCircuit::CompiledCircuit(const Circuit& c) : n_(c.inputs()) {
    const auto slot_of = [&](const WireRef& w) {
        return static_cast<std::uint32_t>(w.from_gate ? n_ + w.index : w.index);
    };
    constexpr std::int64_t limit = std::int64_t{1} << 62;
    for (const auto& g : c.gates()) {
        Op op;
        for (const auto& w : g.inputs) op.wires.push_back({slot_of(w), w.negated, w.multiplicity});
        if (g.kind == GateKind::Thr) {
            op.threshold_op = true;
            BigInt magnitude = 0;
            for (std::size_t i = 0; i < g.inputs.size(); ++i) magnitude += abs_value(g.weights[i]) * g.inputs[i].multiplicity;
            if (magnitude < limit && abs_value(g.threshold) < limit) {
                for (const auto& w : g.weights) op.weights.push_back(w.convert_to<std::int64_t>());
                op.threshold = g.threshold.convert_to<std::int64_t>();
            } else {
                op.big = true;
                op.big_weights = g.weights;
                op.big_threshold = g.threshold;
            }
        } else {
            op.table = symmetric_table(g);
        }
        ops_.push_back(std::move(op));
    }
    output_ = {slot_of(c.output()), c.output().negated, 1};
}

bool CompiledCircuit::run(std::vector<std::uint8_t>& values) const {
    std::size_t slot = static_cast<std::size_t>(n_);
    for (const auto& op : ops_) {
        bool v = false;
        if (!op.threshold_op) {
            std::uint64_t count = 0;
            for (const auto& w : op.wires)
                if ((values[w.slot] != 0) != w.negated) count += w.mult;
            v = op.table[count] != 0;
        } else if (!op.big) {
            std::int64_t sum = 0;
            for (std::size_t i = 0; i < op.wires.size(); ++i) {
                const auto& w = op.wires[i];
                if ((values[w.slot] != 0) != w.negated) sum += op.weights[i] * static_cast<std::int64_t>(w.mult);
            }
            v = sum >= op.threshold;
        } else {
            BigInt sum = 0;
            for (std::size_t i = 0; i < op.wires.size(); ++i) {
                const auto& w = op.wires[i];
                if ((values[w.slot] != 0) != w.negated) sum += op.big_weights[i] * w.mult;
            }
            v = sum >= op.big_threshold;
        }
        values[slot++] = v ? 1 : 0;
    }
    return (values[output_.slot] != 0) != output_.negated;
}

bool CompiledCircuit::operator()(std::uint64_t index) const {
    std::vector<std::uint8_t> values;
    return eval_index(index, values);
}

bool CompiledCircuit::eval_index(std::uint64_t index, std::vector<std::uint8_t>& scratch) const {
    scratch.resize(static_cast<std::size_t>(n_) + ops_.size());
    for (int i = 0; i < n_; ++i) scratch[static_cast<std::size_t>(i)] = (index >> i) & 1U;
    return run(scratch);
}

bool CompiledCircuit::eval(std::span<const std::uint8_t> x) const {
    if (x.size() != static_cast<std::size_t>(n_)) throw InvalidInput("assignment length does not match input count");
    std::vector<std::uint8_t> values(static_cast<std::size_t>(n_) + ops_.size());
    for (int i = 0; i < n_; ++i) values[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] != 0;
    return run(values);
}

bool eval_on_assignment(const Circuit& c, std::span<const std::uint8_t> x) { return CompiledCircuit(c).eval(x); }

TruthTable brute_force_truth_table(const Circuit& c, int oracle_limit, unsigned threads) {
    if (c.inputs() > oracle_limit)
        throw CapExceeded("oracle limit exceeded: " + std::to_string(c.inputs()) + " > " + std::to_string(oracle_limit));
    const CompiledCircuit cc(c);
    TruthTable table(c.inputs());
    const std::uint64_t total = std::uint64_t{1} << c.inputs();
    auto words = table.bits().words();
    const auto fill = [&](std::size_t word_lo, std::size_t word_hi) {
        std::vector<std::uint8_t> values;
        for (std::size_t wi = word_lo; wi < word_hi; ++wi) {
            std::uint64_t word = 0;
            const std::uint64_t base = wi * 64;
            const std::uint64_t count = std::min<std::uint64_t>(64, total - base);
            for (std::uint64_t b = 0; b < count; ++b) {
                if (cc.eval_index(base + b, values)) word |= std::uint64_t{1} << b;
            }
            words[wi] = word;
        }
    };
    threads = std::max(1U, threads);
    if (threads == 1 || words.size() < 2 * threads) {
        fill(0, words.size());
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (words.size() + threads - 1) / threads;
        for (std::size_t lo = 0; lo < words.size(); lo += chunk)
            pool.emplace_back(fill, lo, std::min(words.size(), lo + chunk));
    }
    return table;
}

std::uint64_t brute_force_count_sat(const Circuit& c, int oracle_limit, unsigned threads) {
    return brute_force_truth_table(c, oracle_limit, threads).count();
}

// ---------------------------------------------------------------- shape

std::string_view tag_name(ShapeTag tag) {
    switch (tag) {
        case ShapeTag::SymSym: return "SYM-SYM";
        case ShapeTag::ThrThr: return "THR-THR";
        case ShapeTag::AndThr: return "AND-THR";
        case ShapeTag::Ac0ModTwoSym: return "AC0[2]-SYM";
        case ShapeTag::SymThr: return "SYM-THR";
        case ShapeTag::Generic: return "generic";
    }
    return "?";
}

ShapeReport classify_shape(const Circuit& c) {
    ShapeReport report;
    const auto& gates = c.gates();
    std::vector<int> depth(gates.size(), 0);
    std::vector<bool> bottom(gates.size(), true);
    for (std::size_t g = 0; g < gates.size(); ++g) {
        int d = 0;
        for (const auto& w : gates[g].inputs) {
            report.wire_count += w.multiplicity;
            if (w.from_gate) {
                bottom[g] = false;
                d = std::max(d, depth[w.index]);
            }
        }
        depth[g] = d + 1;
    }
    const WireRef& out = c.output();
    report.depth = out.from_gate ? depth[out.index] : 0;

    if (out.from_gate && report.depth == 2) {
        const Gate& top = gates[out.index];
        const auto lower_ok = [&](auto pred) {
            return std::all_of(top.inputs.begin(), top.inputs.end(), [&](const WireRef& w) {
                return !w.from_gate || (bottom[w.index] && pred(gates[w.index].kind));
            });
        };
        const bool sym_bottoms = lower_ok(is_symmetric_kind);
        const bool thr_bottoms = lower_ok(is_threshold_kind);
        if (is_symmetric_kind(top.kind) && sym_bottoms) report.tags.insert(ShapeTag::SymSym);
        if (is_symmetric_kind(top.kind) && thr_bottoms) report.tags.insert(ShapeTag::SymThr);
        if (is_threshold_kind(top.kind) && thr_bottoms) report.tags.insert(ShapeTag::ThrThr);
        if (top.kind == GateKind::And && thr_bottoms) report.tags.insert(ShapeTag::AndThr);
    }
    if (out.from_gate && report.depth >= 2) {
        const auto live = c.reachable();
        bool ok = true;
        for (std::size_t g = 0; g < gates.size() && ok; ++g) {
            if (!live[g]) continue;
            const GateKind k = gates[g].kind;
            if (bottom[g])
                ok = is_symmetric_kind(k);
            else
                ok = k == GateKind::And || k == GateKind::Or || k == GateKind::Xor ||
                     (k == GateKind::Mod && gates[g].modulus == 2);
        }
        if (ok) report.tags.insert(ShapeTag::Ac0ModTwoSym);
    }
    if (report.tags.empty()) report.tags.insert(ShapeTag::Generic);
    return report;
}

// ---------------------------------------------------------------- restriction

Circuit restrict(const Circuit& c, std::span<const InputFix> fixes) {
    const auto n = static_cast<std::size_t>(c.inputs());
    std::vector<std::optional<bool>> fixed(n);
    for (const auto& f : fixes) {
        if (f.input >= n) throw InvalidInput("restriction index " + std::to_string(f.input + 1) + " out of range");
        fixed[f.input] = f.value;
    }
    std::vector<std::size_t> remap(n, 0);
    std::size_t kept = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (!fixed[i]) remap[i] = kept++;

    std::vector<Gate> gates;
    gates.reserve(c.gates().size() + 1);
    for (const auto& g : c.gates()) {
        Gate out = g;
        out.inputs.clear();
        out.weights.clear();
        std::uint64_t fixed_count = 0;
        BigInt fixed_sum = 0;
        bool touched = false;
        for (std::size_t i = 0; i < g.inputs.size(); ++i) {
            WireRef w = g.inputs[i];
            if (!w.from_gate && fixed[w.index]) {
                touched = true;
                const bool v = *fixed[w.index] != w.negated;
                if (v) {
                    fixed_count += w.multiplicity;
                    if (g.kind == GateKind::Thr) fixed_sum += g.weights[i] * w.multiplicity;
                }
                continue;
            }
            if (!w.from_gate) w.index = remap[w.index];
            out.inputs.push_back(w);
            if (g.kind == GateKind::Thr) out.weights.push_back(g.weights[i]);
        }
        if (touched) {
            if (g.kind == GateKind::Thr) {
                out.threshold = g.threshold - fixed_sum;
            } else {
                const auto full = symmetric_table(g);
                const std::uint64_t rest = out.fan_in();
                out.kind = GateKind::Sym;
                out.modulus = 0;
                out.table.assign(full.begin() + static_cast<std::ptrdiff_t>(fixed_count),
                                 full.begin() + static_cast<std::ptrdiff_t>(fixed_count + rest + 1));
            }
        }
        gates.push_back(std::move(out));
    }

    WireRef output = c.output();
    if (!output.from_gate && fixed[output.index]) {
        std::string id = "const";
        const auto taken = [&](const std::string& s) {
            return std::any_of(gates.begin(), gates.end(), [&](const Gate& g) { return g.id == s; });
        };
        for (int k = 0; taken(id); ++k) id = "const" + std::to_string(k);
        const bool v = *fixed[output.index] != output.negated;
        gates.push_back(Gate::sym(id, {}, {static_cast<std::uint8_t>(v ? 1 : 0)}));
        output = WireRef::gate(gates.size() - 1);
    } else if (!output.from_gate) {
        output.index = remap[output.index];
    }
    return Circuit(static_cast<int>(kept), std::move(gates), output);
}

Circuit negate_output(const Circuit& c) {
    WireRef out = c.output();
    out.negated = !out.negated;
    return Circuit(c.inputs(), c.gates(), out);
}

Circuit conjunction(const Circuit& g, const Circuit& h) {
    if (g.inputs() != h.inputs()) throw InvalidInput("conjunction of circuits with different input counts");
    std::vector<Gate> gates;
    std::vector<WireRef> top;
    // Symmetric output gates (after absorbing), with their output negation.
    std::vector<std::pair<std::size_t, bool>> symmetric_tops;
    const auto absorb = [&](const Circuit& c, const std::string& prefix) {
        const std::size_t offset = gates.size();
        for (const auto& gate : c.gates()) {
            Gate copy = gate;
            copy.id = prefix + gate.id;
            for (auto& w : copy.inputs)
                if (w.from_gate) w.index += offset;
            gates.push_back(std::move(copy));
        }
        WireRef out = c.output();
        if (out.from_gate) out.index += offset;
        if (out.from_gate && is_symmetric_kind(gates[out.index].kind)) symmetric_tops.emplace_back(out.index, out.negated);
        if (out.from_gate && !out.negated && gates[out.index].kind == GateKind::And)
            top.insert(top.end(), gates[out.index].inputs.begin(), gates[out.index].inputs.end());
        else
            top.push_back(out);
    };
    absorb(g, "a_");
    absorb(h, "b_");
    const auto plain_and = [&](const std::pair<std::size_t, bool>& t) {
        return !t.second && gates[t.first].kind == GateKind::And;
    };
    if (symmetric_tops.size() == 2 && !(plain_and(symmetric_tops[0]) && plain_and(symmetric_tops[1]))) {
        // AND of two symmetric gates is one symmetric gate: the second gate's wires count
        // with weight F1 + 1, so the merged count v encodes (v mod (F1 + 1), v / (F1 + 1)).
        const auto table_of = [&](const std::pair<std::size_t, bool>& t) {
            auto table = symmetric_table(gates[t.first]);
            if (t.second)
                for (auto& b : table) b ^= 1U;
            return table;
        };
        const auto first = table_of(symmetric_tops[0]);
        const auto second = table_of(symmetric_tops[1]);
        const std::uint64_t radix = first.size();
        std::vector<WireRef> wires = gates[symmetric_tops[0].first].inputs;
        for (WireRef w : gates[symmetric_tops[1].first].inputs) {
            const std::uint64_t mult = std::uint64_t{w.multiplicity} * radix;
            if (mult > std::numeric_limits<std::uint32_t>::max()) throw CapExceeded("merged wire multiplicity overflows");
            w.multiplicity = static_cast<std::uint32_t>(mult);
            wires.push_back(w);
        }
        std::vector<std::uint8_t> table(radix * second.size());
        for (std::size_t v = 0; v < table.size(); ++v) table[v] = first[v % radix] & second[v / radix];
        top.clear();
        gates.push_back(Gate::sym("and_top", std::move(wires), std::move(table)));
    } else {
        gates.push_back(Gate::basic("and_top", GateKind::And, std::move(top)));
    }
    const WireRef top_wire = WireRef::gate(gates.size() - 1);
    const Circuit full(g.inputs(), std::move(gates), top_wire);

    // Drop gates that flattening left unreferenced.
    const auto live = full.reachable();
    std::vector<std::size_t> remap(full.gates().size(), 0);
    std::vector<Gate> kept;
    for (std::size_t i = 0; i < full.gates().size(); ++i) {
        if (!live[i]) continue;
        remap[i] = kept.size();
        Gate copy = full.gates()[i];
        for (auto& w : copy.inputs)
            if (w.from_gate) w.index = remap[w.index];
        kept.push_back(std::move(copy));
    }
    const WireRef out = WireRef::gate(kept.size() - 1);
    return Circuit(full.inputs(), std::move(kept), out);
}

}  // namespace accthr
