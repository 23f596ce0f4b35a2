#include "accthr/symrank.hpp"

#include "accthr/errors.hpp"

#include <algorithm>
#include <ostream>
#include <string>

namespace accthr {

SymRankDecomp decompose(const SymSymCircuit& c, std::uint64_t rank_cap) {
    c.validate();
    SymRankDecomp d;
    d.left_bits = (c.n + 1) / 2;
    d.right_bits = c.n / 2;
    const auto lb = static_cast<std::size_t>(d.left_bits);
    const auto rb = static_cast<std::size_t>(d.right_bits);
    const std::size_t rows = std::size_t{1} << lb;
    const std::size_t cols = std::size_t{1} << rb;

    struct GateSplit {
        HalfSums left;
        HalfSums right;
        std::vector<std::vector<std::uint32_t>> by_left;   // left value -> components
        std::vector<std::vector<std::uint32_t>> by_right;  // right value -> components
    };
    std::vector<GateSplit> splits;
    splits.reserve(c.bottom.size());
    for (std::size_t g = 0; g < c.bottom.size(); ++g) {
        const GeneralizedSymGate& gate = c.bottom[g];
        GateSplit s{half_sums(gate, 0, lb), half_sums(gate, lb, rb), {}, {}};
        s.by_left.resize(s.left.values.size());
        s.by_right.resize(s.right.values.size());
        const std::vector<std::uint8_t> accept = accept_pairs(gate, s.left, s.right);
        const std::uint64_t accepted = static_cast<std::uint64_t>(std::count(accept.begin(), accept.end(), 1));
        if (d.components.size() + accepted > rank_cap)
            throw CapExceeded("symmetric rank exceeds the cap of " + std::to_string(rank_cap));
        const std::size_t nr = s.right.values.size();
        for (std::size_t a = 0; a < s.left.values.size(); ++a)
            for (std::size_t b = 0; b < nr; ++b) {
                if (accept[a * nr + b] == 0) continue;
                const auto id = static_cast<std::uint32_t>(d.components.size());
                d.components.push_back({g, s.left.values[a], s.right.values[b]});
                s.by_left[a].push_back(id);
                s.by_right[b].push_back(id);
            }
        splits.push_back(std::move(s));
    }

    const std::size_t r = d.components.size();
    d.a = BitMatrix(rows, r);
    d.b = BitMatrix(r, cols);
    d.a_rows.assign(rows, {});
    d.b_cols.assign(cols, {});
    for (const auto& s : splits) {
        for (std::size_t i = 0; i < rows; ++i)
            for (const auto k : s.by_left[s.left.index[i]]) {
                d.a.set(i, k, true);
                d.a_rows[i].push_back(k);
            }
        for (std::size_t j = 0; j < cols; ++j)
            for (const auto k : s.by_right[s.right.index[j]]) {
                d.b.set(k, j, true);
                d.b_cols[j].push_back(k);
            }
    }
    // (A B)[i, j] counts true bottom gates, so only counts up to the gate count occur.
    d.filter.assign(r + 1, 0);
    for (std::size_t v = 0; v < c.top.size() && v <= r; ++v) d.filter[v] = c.top[v];
    return d;
}

bool reconstruct_entry(const SymRankDecomp& d, std::size_t i, std::size_t j) {
    if (i >= d.a.rows() || j >= d.b.cols()) throw InvalidInput("decomposition entry out of range");
    std::size_t sum = 0;
    for (std::size_t k = 0; k < d.rank(); ++k) sum += (d.a.get(i, k) && d.b.get(k, j)) ? 1 : 0;
    return d.filter[sum] != 0;
}

std::uint64_t unit_rank_bound(const SymSymCircuit& c) {
    std::uint64_t t = 0;
    for (const auto& g : c.bottom) {
        for (const auto& w : g.wires())
            if (w.weight != 1) throw InvalidInput("rank bound needs unit weights");
        t += g.wires().size();
    }
    std::uint64_t bound = 0;
    for (const auto& g : c.bottom)
        for (std::uint64_t v = 0; v <= t; ++v)
            if (g.predicate().accepts(static_cast<std::int64_t>(v))) bound += v + 1;  // pairs (a, v - a)
    return bound;
}

void dump(std::ostream& out, const SymRankDecomp& d) {
    const std::size_t r = d.rank();
    out << d.left_bits << ' ' << d.right_bits << ' ' << r << '\n';
    for (std::size_t i = 0; i < d.a.rows(); ++i) {
        for (std::size_t k = 0; k < r; ++k) out << (k == 0 ? "" : " ") << (d.a.get(i, k) ? 1 : 0);
        out << '\n';
    }
    for (std::size_t j = 0; j < d.b.cols(); ++j) {
        for (std::size_t k = 0; k < r; ++k) out << (k == 0 ? "" : " ") << (d.b.get(k, j) ? 1 : 0);
        out << '\n';
    }
    for (std::size_t v = 0; v <= r; ++v) out << (v == 0 ? "" : " ") << static_cast<int>(d.filter[v]);
    out << '\n';
}

}  // namespace accthr
