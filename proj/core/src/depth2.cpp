#include "accthr/depth2.hpp"

#include "accthr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace accthr {

void WtpInstance::validate() const {
    if (left.values.size() != left.rows * left.cols || right.values.size() != right.rows * right.cols)
        throw InvalidInput("matrix storage does not match its dimensions");
    if (left.cols != right.rows || weights.size() != left.cols)
        throw InvalidInput("threshold product needs left n x d, right d x n and d weights");
}

IntMatrix circledast_naive(const WtpInstance& inst) {
    inst.validate();
    IntMatrix p(inst.left.rows, inst.right.cols);
    for (std::size_t i = 0; i < p.rows; ++i)
        for (std::size_t j = 0; j < p.cols; ++j) {
            BigInt sum = 0;
            for (std::size_t k = 0; k < inst.weights.size(); ++k)
                if (inst.left.at(i, k) <= inst.right.at(k, j)) sum += inst.weights[k];
            p.at(i, j) = sum;
        }
    return p;
}

namespace {

struct Ranked {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t d = 0;
    std::vector<std::uint32_t> left;   // column-major: left[k * rows + i]
    std::vector<std::uint32_t> right;  // row-major: right[k * cols + j]
};

Ranked rank_all(const WtpInstance& inst) {
    Ranked r;
    r.rows = inst.left.rows;
    r.cols = inst.right.cols;
    r.d = inst.weights.size();
    r.left.resize(r.rows * r.d);
    r.right.resize(r.cols * r.d);
    std::vector<BigInt> values;
    for (std::size_t k = 0; k < r.d; ++k) {
        values.clear();
        for (std::size_t i = 0; i < r.rows; ++i) values.push_back(inst.left.at(i, k));
        for (std::size_t j = 0; j < r.cols; ++j) values.push_back(inst.right.at(k, j));
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        const auto rank = [&](const BigInt& v) {
            return static_cast<std::uint32_t>(std::lower_bound(values.begin(), values.end(), v) - values.begin() + 1);
        };
        for (std::size_t i = 0; i < r.rows; ++i) r.left[k * r.rows + i] = rank(inst.left.at(i, k));
        for (std::size_t j = 0; j < r.cols; ++j) r.right[k * r.cols + j] = rank(inst.right.at(k, j));
    }
    return r;
}

BigInt abs_sum(const std::vector<BigInt>& w) {
    BigInt s = 0;
    for (const auto& v : w) s += v < 0 ? BigInt(-v) : v;
    return s;
}

// Accumulates in machine words when every partial sum fits, else in big integers.
class Accumulator {
public:
    Accumulator(std::size_t rows, std::size_t cols, const std::vector<BigInt>& weights)
        : rows_(rows), cols_(cols), small_(abs_sum(weights) < (BigInt(1) << 62)) {
        if (small_) {
            small_values_.assign(rows * cols, 0);
            for (const auto& w : weights) small_weights_.push_back(w.convert_to<std::int64_t>());
        } else {
            big_values_.assign(rows * cols, BigInt(0));
        }
        big_weights_ = weights;
    }
    void add(std::size_t i, std::size_t j, std::size_t k) {
        if (small_)
            small_values_[i * cols_ + j] += small_weights_[k];
        else
            big_values_[i * cols_ + j] += big_weights_[k];
    }
    void add_value(std::size_t i, std::size_t j, const BigInt& v) {
        if (small_)
            small_values_[i * cols_ + j] += v.convert_to<std::int64_t>();
        else
            big_values_[i * cols_ + j] += v;
    }
    [[nodiscard]] bool small() const { return small_; }
    std::int64_t* small_row(std::size_t i) { return small_values_.data() + i * cols_; }
    [[nodiscard]] IntMatrix finish() const {
        IntMatrix out(rows_, cols_);
        for (std::size_t e = 0; e < out.values.size(); ++e)
            out.values[e] = small_ ? BigInt(small_values_[e]) : big_values_[e];
        return out;
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    bool small_;
    std::vector<std::int64_t> small_values_;
    std::vector<std::int64_t> small_weights_;
    std::vector<BigInt> big_values_;
    std::vector<BigInt> big_weights_;
};

}  // namespace

WtpInstance rank_reduce(const WtpInstance& inst) {
    inst.validate();
    const Ranked r = rank_all(inst);
    WtpInstance out;
    out.weights = inst.weights;
    out.left = IntMatrix(r.rows, r.d);
    out.right = IntMatrix(r.d, r.cols);
    for (std::size_t k = 0; k < r.d; ++k) {
        for (std::size_t i = 0; i < r.rows; ++i) out.left.at(i, k) = r.left[k * r.rows + i];
        for (std::size_t j = 0; j < r.cols; ++j) out.right.at(k, j) = r.right[k * r.cols + j];
    }
    return out;
}

BucketPlan bucketize(std::span<const std::uint32_t> left_ranks, std::span<const std::uint32_t> right_ranks,
                     std::size_t capacity) {
    if (capacity == 0) throw InvalidInput("bucket capacity must be positive");
    std::vector<std::uint32_t> sorted(left_ranks.begin(), left_ranks.end());
    sorted.insert(sorted.end(), right_ranks.begin(), right_ranks.end());
    std::sort(sorted.begin(), sorted.end());
    BucketPlan plan;
    const std::uint32_t top = sorted.empty() ? 0 : sorted.back();
    plan.bucket_of_rank.assign(static_cast<std::size_t>(top) + 1, 0);
    for (std::size_t pos = 0; pos < sorted.size(); ++pos)
        if (pos == 0 || sorted[pos] != sorted[pos - 1])
            plan.bucket_of_rank[sorted[pos]] = static_cast<std::uint32_t>(pos / capacity);
    plan.buckets = (sorted.size() + capacity - 1) / capacity;
    return plan;
}

std::size_t default_capacity(std::size_t n, MmMode mode) {
    const double exponent = mode == MmMode::Coppersmith ? 0.914 : 0.5;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), exponent) - 1e-9)));
}

IntMatrix weighted_threshold_product(const WtpInstance& inst, const Depth2Params& params, WtpStats* stats) {
    inst.validate();
    const Ranked r = rank_all(inst);
    const std::size_t capacity =
        params.capacity != 0 ? params.capacity : default_capacity(std::max(r.rows, r.cols), params.mode);
    WtpStats local;

    std::vector<BucketPlan> plans;
    plans.reserve(r.d);
    for (std::size_t k = 0; k < r.d; ++k) {
        plans.push_back(bucketize(std::span(r.left).subspan(k * r.rows, r.rows),
                                  std::span(r.right).subspan(k * r.cols, r.cols), capacity));
        local.buckets = std::max(local.buckets, plans.back().buckets);
    }
    const std::size_t t = std::max<std::size_t>(local.buckets, 1);

    Accumulator acc(r.rows, r.cols, inst.weights);

    // Same-bucket pass.
    for (std::size_t k = 0; k < r.d; ++k) {
        const auto& bucket = plans[k].bucket_of_rank;
        std::vector<std::vector<std::uint32_t>> rows_in(t);
        std::vector<std::vector<std::uint32_t>> cols_in(t);
        for (std::size_t i = 0; i < r.rows; ++i) rows_in[bucket[r.left[k * r.rows + i]]].push_back(static_cast<std::uint32_t>(i));
        for (std::size_t j = 0; j < r.cols; ++j) cols_in[bucket[r.right[k * r.cols + j]]].push_back(static_cast<std::uint32_t>(j));
        std::size_t right_above = r.cols;
        for (std::size_t b = 0; b < t; ++b) {
            right_above -= cols_in[b].size();
            local.cross_hits += static_cast<std::uint64_t>(rows_in[b].size()) * right_above;
            for (const auto i : rows_in[b])
                for (const auto j : cols_in[b])
                    if (r.left[k * r.rows + i] <= r.right[k * r.cols + j]) {
                        acc.add(i, j, k);
                        ++local.same_bucket_hits;
                    }
        }
    }

    // Cross-bucket pass: M' (rows x d t) holds w_k at the bucket of left[i][k]; N' (d t x cols)
    // row (k, l) marks the columns whose right[k][j] lies in a bucket above l.
    const std::size_t inner = r.d * t;
    std::vector<std::uint8_t> n_prime(inner * r.cols, 0);
    for (std::size_t k = 0; k < r.d; ++k)
        for (std::size_t j = 0; j < r.cols; ++j) {
            const std::uint32_t b = plans[k].bucket_of_rank[r.right[k * r.cols + j]];
            for (std::uint32_t l = 0; l < b; ++l) n_prime[(k * t + l) * r.cols + j] = 1;
        }

    bool done = false;
    if (params.mode == MmMode::Coppersmith) {
        const PrimeField f;
        // Entries of M' N' are bounded by sum |w|; centered lifting needs p > 2 sum |w|.
        if (2 * abs_sum(inst.weights) < BigInt(f.modulus())) {
            FieldMatrix mp(r.rows, inner);
            FieldMatrix np(inner, r.cols);
            for (std::size_t i = 0; i < r.rows; ++i)
                for (std::size_t k = 0; k < r.d; ++k)
                    mp(i, k * t + plans[k].bucket_of_rank[r.left[k * r.rows + i]]) = f.from_big(inst.weights[k]);
            for (std::size_t e = 0; e < n_prime.size(); ++e) np.data()[e] = n_prime[e];
            OpCounter ops;
            const FieldMatrix prod = coppersmith_rect_mm(f, mp, np, params.mm, &ops);
            local.multiplications += ops.multiplications;
            for (std::size_t i = 0; i < r.rows; ++i)
                for (std::size_t j = 0; j < r.cols; ++j) acc.add_value(i, j, f.centered(prod(i, j)));
            done = true;
        }
    }
    if (!done) {
        // Row i of M' has one nonzero per k, so the product visits d rows of N' per row of M'.
        for (std::size_t i = 0; i < r.rows; ++i)
            for (std::size_t k = 0; k < r.d; ++k) {
                const std::uint8_t* row = &n_prime[(k * t + plans[k].bucket_of_rank[r.left[k * r.rows + i]]) * r.cols];
                if (acc.small()) {
                    std::int64_t* out = acc.small_row(i);
                    const std::int64_t w = inst.weights[k].convert_to<std::int64_t>();
                    for (std::size_t j = 0; j < r.cols; ++j)
                        if (row[j] != 0) out[j] += w;
                } else {
                    for (std::size_t j = 0; j < r.cols; ++j)
                        if (row[j] != 0) acc.add(i, j, k);
                }
            }
        local.multiplications += static_cast<std::uint64_t>(r.rows) * r.d * r.cols;
    }
    if (stats != nullptr) *stats = local;
    return acc.finish();
}

// ---------------------------------------------------------------- rectangles

namespace {

// sum left_w . x + sum right_w . y >= threshold
struct SplitForm {
    std::vector<BigInt> left_w;
    std::vector<BigInt> right_w;
    BigInt threshold;
};

SplitForm split_bottom(const Circuit& c, const WireRef& w, int k) {
    SplitForm f;
    f.left_w.assign(static_cast<std::size_t>(k), BigInt(0));
    f.right_w.assign(static_cast<std::size_t>(k), BigInt(0));
    const auto add = [&](std::size_t input, bool negated, const BigInt& coeff) {
        BigInt c0 = coeff;
        if (negated) {
            // coeff * (1 - x)
            f.threshold -= c0;
            c0 = -c0;
        }
        if (input < static_cast<std::size_t>(k))
            f.left_w[input] += c0;
        else
            f.right_w[input - static_cast<std::size_t>(k)] += c0;
    };
    if (!w.from_gate) {
        // Dummy bottom gate x >= 1.
        f.threshold = 1;
        add(w.index, false, BigInt(1));
        return f;
    }
    const Gate& g = c.gates()[w.index];
    if (!is_threshold_kind(g.kind) ||
        std::any_of(g.inputs.begin(), g.inputs.end(), [](const WireRef& x) { return x.from_gate; }))
        throw ShapeError("bottom gate " + g.id + " is not a threshold gate over inputs");
    const ThresholdForm form = threshold_form(g);
    f.threshold = form.threshold;
    for (std::size_t i = 0; i < g.inputs.size(); ++i)
        add(g.inputs[i].index, g.inputs[i].negated, form.weights[i] * g.inputs[i].multiplicity);
    return f;
}

BigInt half_value(const std::vector<BigInt>& w, std::uint64_t assignment) {
    BigInt s = 0;
    for (std::size_t b = 0; b < w.size(); ++b)
        if ((assignment >> b) & 1U) s += w[b];
    return s;
}

// Product instance for the top gate's wires; returns the per-wire weights and the offset
// contributed by negated top wires.
struct TopSetup {
    WtpInstance inst;
    BigInt offset = 0;
};

TopSetup build_instance(const Circuit& c, const RectInput& rect, const Gate& top, const std::vector<BigInt>& wire_weights) {
    if (c.inputs() != 2 * rect.k) throw InvalidInput("rectangle halves must cover the circuit inputs");
    for (const auto v : rect.left)
        if (rect.k < 64 && (v >> rect.k) != 0) throw InvalidInput("left assignment wider than k bits");
    for (const auto v : rect.right)
        if (rect.k < 64 && (v >> rect.k) != 0) throw InvalidInput("right assignment wider than k bits");
    TopSetup s;
    const std::size_t d = top.inputs.size();
    s.inst.left = IntMatrix(rect.left.size(), d);
    s.inst.right = IntMatrix(d, rect.right.size());
    for (std::size_t k = 0; k < d; ++k) {
        const WireRef& w = top.inputs[k];
        const SplitForm f = split_bottom(c, w, rect.k);
        for (std::size_t i = 0; i < rect.left.size(); ++i) s.inst.left.at(i, k) = f.threshold - half_value(f.left_w, rect.left[i]);
        for (std::size_t j = 0; j < rect.right.size(); ++j) s.inst.right.at(k, j) = half_value(f.right_w, rect.right[j]);
        BigInt weight = wire_weights[k] * w.multiplicity;
        if (w.negated) {
            // weight * (1 - g)
            s.offset += weight;
            weight = -weight;
        }
        s.inst.weights.push_back(weight);
    }
    return s;
}

const Gate& top_gate(const Circuit& c) {
    if (!c.output().from_gate) throw ShapeError("output must be a gate");
    return c.gates()[c.output().index];
}

}  // namespace

BitMatrix eval_thrthr_rectangle(const Circuit& c, const RectInput& rect, const Depth2Params& params) {
    const Gate& top = top_gate(c);
    if (!is_threshold_kind(top.kind)) throw ShapeError("top gate is not a threshold gate");
    const ThresholdForm form = threshold_form(top);
    const TopSetup s = build_instance(c, rect, top, form.weights);
    const IntMatrix p = weighted_threshold_product(s.inst, params);
    const BigInt threshold = form.threshold - s.offset;
    const bool flip = c.output().negated;
    BitMatrix out(p.rows, p.cols);
    for (std::size_t i = 0; i < p.rows; ++i)
        for (std::size_t j = 0; j < p.cols; ++j) out.set(i, j, (p.at(i, j) >= threshold) != flip);
    return out;
}

BitMatrix eval_symthr_rectangle(const Circuit& c, const RectInput& rect, const Depth2Params& params) {
    const Gate& top = top_gate(c);
    if (!is_symmetric_kind(top.kind)) throw ShapeError("top gate is not symmetric");
    const auto table = symmetric_table(top);
    const TopSetup s = build_instance(c, rect, top, std::vector<BigInt>(top.inputs.size(), BigInt(1)));
    const IntMatrix p = weighted_threshold_product(s.inst, params);
    const bool flip = c.output().negated;
    BitMatrix out(p.rows, p.cols);
    for (std::size_t i = 0; i < p.rows; ++i)
        for (std::size_t j = 0; j < p.cols; ++j) {
            const auto count = (p.at(i, j) + s.offset).convert_to<std::size_t>();
            out.set(i, j, (table.at(count) != 0) != flip);
        }
    return out;
}

std::vector<std::uint64_t> read_rect_side(std::istream& in, int k) {
    if (k < 1 || k > 32) throw InvalidInput("half width must be between 1 and 32");
    std::vector<std::uint64_t> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line.size() != static_cast<std::size_t>(k)) throw ParseError(number, "expected " + std::to_string(k) + " bits");
        std::uint64_t v = 0;
        for (std::size_t b = 0; b < line.size(); ++b) {
            if (line[b] != '0' && line[b] != '1') throw ParseError(number, "bit strings use only 0 and 1");
            if (line[b] == '1') v |= std::uint64_t{1} << b;
        }
        out.push_back(v);
    }
    return out;
}

void write_bit_matrix(std::ostream& out, const BitMatrix& m, int k) {
    const auto put32 = [&](std::uint32_t v) {
        for (int b = 0; b < 4; ++b) out.put(static_cast<char>((v >> (8 * b)) & 0xFFU));
    };
    put32(static_cast<std::uint32_t>(m.rows()));
    put32(static_cast<std::uint32_t>(k));
    const auto bytes = m.bits().to_bytes();
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace accthr
