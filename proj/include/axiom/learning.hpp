#pragma once

// Seeded randomness, the synthetic pattern task, and the two small learners
// used by the neural-network scenarios.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace axiom::learning {

/// mt19937_64 with portable derived draws (the std distributions are
/// implementation-defined, so traces would differ between standard libraries).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    bool bernoulli(double p) { return uniform() < p; }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

    template <typename T>
    void shuffle(std::vector<T>& v)
    {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

using Vector = std::vector<double>;

struct Pattern {
    Vector x;
    std::size_t label = 0;
};

struct Dataset {
    std::vector<Vector> prototypes;
    std::vector<Pattern> train;
    std::vector<Pattern> test;
};

/// Binary prototypes with disjoint supports on a side x side grid, plus
/// bit-flip noise. Labels cycle through the classes in a shuffled order.
inline Dataset make_dataset(Rng& rng, std::size_t side, std::size_t classes, std::size_t train_count,
                            std::size_t test_count, double noise)
{
    const std::size_t dims = side * side;
    std::vector<std::size_t> pixels(dims);
    for (std::size_t i = 0; i < dims; ++i) pixels[i] = i;
    rng.shuffle(pixels);

    Dataset d;
    d.prototypes.assign(classes, Vector(dims, 0.0));
    for (std::size_t i = 0; i < dims; ++i) d.prototypes[i % classes][pixels[i]] = 1.0;

    auto sample = [&](std::size_t n, std::vector<Pattern>& out) {
        std::vector<std::size_t> labels;
        for (std::size_t i = 0; i < n; ++i) labels.push_back(i % classes);
        rng.shuffle(labels);
        for (auto c : labels) {
            Vector x = d.prototypes[c];
            for (auto& v : x)
                if (rng.bernoulli(noise)) v = 1.0 - v;
            out.push_back({std::move(x), c});
        }
    };
    sample(train_count, d.train);
    sample(test_count, d.test);
    return d;
}

inline double norm(const Vector& v)
{
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

/// One single-layer network per class. Training clamps the output of the
/// labelled network to 1 (others 0) and applies dw = eta * x * y.
/// Prediction compares normalized input and weight vectors by Euclidean norm.
class HebbianBank {
public:
    HebbianBank(std::size_t classes, std::size_t dims, double eta) : weights_(classes, Vector(dims, 0.0)), eta_(eta) {}

    void learn(const Vector& x, std::size_t label)
    {
        for (std::size_t k = 0; k < weights_.size(); ++k) {
            const double y = k == label ? 1.0 : 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) weights_[k][i] += eta_ * x[i] * y;
        }
    }

    /// ||x/|x| - w_k/|w_k||| per network; networks with zero weights score +inf.
    [[nodiscard]] Vector distances(const Vector& x) const
    {
        Vector out;
        const double nx = norm(x);
        for (const auto& w : weights_) {
            const double nw = norm(w);
            if (nw == 0.0 || nx == 0.0) {
                out.push_back(std::numeric_limits<double>::infinity());
                continue;
            }
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double d = x[i] / nx - w[i] / nw;
                s += d * d;
            }
            out.push_back(std::sqrt(s));
        }
        return out;
    }

    [[nodiscard]] std::size_t predict(const Vector& x) const
    {
        auto d = distances(x);
        return static_cast<std::size_t>(std::min_element(d.begin(), d.end()) - d.begin());
    }

    [[nodiscard]] const std::vector<Vector>& weights() const { return weights_; }

private:
    std::vector<Vector> weights_;
    double eta_;
};

/// dims -> hidden (tanh) -> classes (softmax), cross-entropy loss, plain SGD.
class Mlp {
public:
    struct Forward {
        Vector hidden;
        Vector probs;
    };

    Mlp(Rng& rng, std::size_t dims, std::size_t hidden, std::size_t classes)
        : w1_(hidden, Vector(dims)), b1_(hidden, 0.0), w2_(classes, Vector(hidden)), b2_(classes, 0.0)
    {
        const double r1 = 1.0 / std::sqrt(static_cast<double>(dims));
        const double r2 = 1.0 / std::sqrt(static_cast<double>(hidden));
        for (auto& row : w1_)
            for (auto& v : row) v = rng.uniform(-r1, r1);
        for (auto& row : w2_)
            for (auto& v : row) v = rng.uniform(-r2, r2);
    }

    [[nodiscard]] Forward forward(const Vector& x) const
    {
        Forward f;
        for (std::size_t h = 0; h < w1_.size(); ++h) {
            double z = b1_[h];
            for (std::size_t i = 0; i < x.size(); ++i) z += w1_[h][i] * x[i];
            f.hidden.push_back(std::tanh(z));
        }
        Vector logits;
        for (std::size_t c = 0; c < w2_.size(); ++c) {
            double z = b2_[c];
            for (std::size_t h = 0; h < f.hidden.size(); ++h) z += w2_[c][h] * f.hidden[h];
            logits.push_back(z);
        }
        const double mx = *std::max_element(logits.begin(), logits.end());
        double sum = 0.0;
        for (double z : logits) sum += std::exp(z - mx);
        for (double z : logits) f.probs.push_back(std::exp(z - mx) / sum);
        return f;
    }

    static double loss(const Forward& f, std::size_t label) { return -std::log(std::max(f.probs[label], 1e-300)); }

    /// One gradient step on a single example; returns the pre-update loss.
    double train(const Vector& x, std::size_t label, double eta)
    {
        const Forward f = forward(x);
        Vector dlogit = f.probs;
        dlogit[label] -= 1.0;

        Vector dhidden(f.hidden.size(), 0.0);
        for (std::size_t c = 0; c < w2_.size(); ++c)
            for (std::size_t h = 0; h < f.hidden.size(); ++h) dhidden[h] += w2_[c][h] * dlogit[c];

        for (std::size_t c = 0; c < w2_.size(); ++c) {
            for (std::size_t h = 0; h < f.hidden.size(); ++h) w2_[c][h] -= eta * dlogit[c] * f.hidden[h];
            b2_[c] -= eta * dlogit[c];
        }
        for (std::size_t h = 0; h < w1_.size(); ++h) {
            const double g = dhidden[h] * (1.0 - f.hidden[h] * f.hidden[h]);
            for (std::size_t i = 0; i < x.size(); ++i) w1_[h][i] -= eta * g * x[i];
            b1_[h] -= eta * g;
        }
        return loss(f, label);
    }

    [[nodiscard]] std::size_t predict(const Vector& x) const
    {
        auto p = forward(x).probs;
        return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    }

    [[nodiscard]] const std::vector<Vector>& hidden_weights() const { return w1_; }
    [[nodiscard]] const Vector& hidden_bias() const { return b1_; }
    [[nodiscard]] const std::vector<Vector>& output_weights() const { return w2_; }
    [[nodiscard]] const Vector& output_bias() const { return b2_; }

private:
    std::vector<Vector> w1_;
    Vector b1_;
    std::vector<Vector> w2_;
    Vector b2_;
};

} // namespace axiom::learning
