#pragma once

#include <cmath>
#include <iostream>
#include <span>
#include <string>
#include <vector>

#include "dtmec/common.hpp"
#include "dtmec/rng.hpp"

namespace dtmec {

// Fully connected value network: rectifier on hidden layers, identity on the
// output. Plain double precision throughout; training uses explicit
// backpropagation and vanilla gradient descent.
class Mlp {
  public:
    Mlp() = default;

    explicit Mlp(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)) {
        if (sizes_.size() < 2) throw ModelError("Mlp needs >= 2 layers");
        for (int s : sizes_)
            if (s < 1) throw ModelError("Mlp layer sizes must be >= 1");
        const std::size_t layers = sizes_.size() - 1;
        w_.resize(layers);
        b_.resize(layers);
        gw_.resize(layers);
        gb_.resize(layers);
        for (std::size_t l = 0; l < layers; ++l) {
            w_[l].assign(static_cast<std::size_t>(sizes_[l + 1]) * sizes_[l],
                         0.0);
            b_[l].assign(static_cast<std::size_t>(sizes_[l + 1]), 0.0);
            gw_[l] = w_[l];
            gb_[l] = b_[l];
        }
    }

    static Mlp make(int input, const std::vector<int>& hidden, int output,
                    RngStream& rng) {
        std::vector<int> sizes;
        sizes.push_back(input);
        sizes.insert(sizes.end(), hidden.begin(), hidden.end());
        sizes.push_back(output);
        Mlp net(sizes);
        net.init_uniform(rng);
        return net;
    }

    // U[-1/sqrt(fan_in), +1/sqrt(fan_in)] per layer.
    void init_uniform(RngStream& rng) {
        for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
            const double bound = 1.0 / std::sqrt(sizes_[l]);
            for (double& v : w_[l]) v = rng.uniform(-bound, bound);
            for (double& v : b_[l]) v = rng.uniform(-bound, bound);
        }
    }

    int input_size() const { return sizes_.front(); }
    int output_size() const { return sizes_.back(); }
    const std::vector<int>& layer_sizes() const { return sizes_; }

    // Scratch holding the activations of one forward pass.
    struct Workspace {
        std::vector<std::vector<double>> pre; // pre-activation per layer
        std::vector<std::vector<double>> act; // input + post-activation
    };

    const std::vector<double>& forward_cached(std::span<const double> x,
                                              Workspace& ws) const {
        const std::size_t layers = sizes_.size() - 1;
        ws.pre.resize(layers);
        ws.act.resize(layers + 1);
        ws.act[0].assign(x.begin(), x.end());
        for (std::size_t l = 0; l < layers; ++l) {
            const int rows = sizes_[l + 1];
            const int cols = sizes_[l];
            ws.pre[l].assign(static_cast<std::size_t>(rows), 0.0);
            const double* in = ws.act[l].data();
            for (int r = 0; r < rows; ++r) {
                const double* wrow =
                    w_[l].data() + static_cast<std::size_t>(r) * cols;
                double acc = b_[l][r];
                for (int c = 0; c < cols; ++c) acc += wrow[c] * in[c];
                ws.pre[l][r] = acc;
            }
            ws.act[l + 1] = ws.pre[l];
            if (l + 1 < layers) { // rectifier on hidden layers only
                for (double& v : ws.act[l + 1]) v = std::max(0.0, v);
            }
        }
        return ws.act.back();
    }

    std::vector<double> forward(std::span<const double> x) const {
        Workspace ws;
        return forward_cached(x, ws);
    }

    void zero_gradients() {
        for (auto& g : gw_) g.assign(g.size(), 0.0);
        for (auto& g : gb_) g.assign(g.size(), 0.0);
    }

    // Accumulates parameter gradients for a forward pass left in `ws`.
    void backward(const Workspace& ws, std::span<const double> d_output) {
        const std::size_t layers = sizes_.size() - 1;
        std::vector<double> delta(d_output.begin(), d_output.end());
        for (std::size_t l = layers; l-- > 0;) {
            const int rows = sizes_[l + 1];
            const int cols = sizes_[l];
            const double* in = ws.act[l].data();
            for (int r = 0; r < rows; ++r) {
                const double d = delta[r];
                if (d == 0.0) continue;
                double* grow =
                    gw_[l].data() + static_cast<std::size_t>(r) * cols;
                for (int c = 0; c < cols; ++c) grow[c] += d * in[c];
                gb_[l][r] += d;
            }
            if (l == 0) break;
            std::vector<double> prev(static_cast<std::size_t>(cols), 0.0);
            for (int r = 0; r < rows; ++r) {
                const double d = delta[r];
                if (d == 0.0) continue;
                const double* wrow =
                    w_[l].data() + static_cast<std::size_t>(r) * cols;
                for (int c = 0; c < cols; ++c) prev[c] += d * wrow[c];
            }
            for (int c = 0; c < cols; ++c)
                if (ws.pre[l - 1][c] <= 0.0) prev[c] = 0.0;
            delta = std::move(prev);
        }
    }

    void gradient_step(double learning_rate) {
        for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
            for (std::size_t i = 0; i < w_[l].size(); ++i)
                w_[l][i] -= learning_rate * gw_[l][i];
            for (std::size_t i = 0; i < b_[l].size(); ++i)
                b_[l][i] -= learning_rate * gb_[l][i];
        }
    }

    // Flat parameter view for finite-difference checks.
    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (std::size_t l = 0; l + 1 < sizes_.size(); ++l)
            n += w_[l].size() + b_[l].size();
        return n;
    }

    double parameter(std::size_t i) const {
        return *locate(const_cast<Mlp&>(*this), i);
    }
    void set_parameter(std::size_t i, double v) { *locate(*this, i) = v; }
    double gradient(std::size_t i) const {
        return *locate_grad(const_cast<Mlp&>(*this), i);
    }

    friend bool operator==(const Mlp& a, const Mlp& b) {
        return a.sizes_ == b.sizes_ && a.w_ == b.w_ && a.b_ == b.b_;
    }

    void save(std::ostream& out) const {
        out << "dtmec-qnet 1\n";
        out << sizes_.size();
        for (int s : sizes_) out << ' ' << s;
        out << '\n';
        out.precision(17);
        for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
            for (double v : w_[l]) out << v << '\n';
            for (double v : b_[l]) out << v << '\n';
        }
    }

    static Mlp load(std::istream& in) {
        std::string magic;
        int version = 0;
        in >> magic >> version;
        if (magic != "dtmec-qnet" || version != 1)
            throw ModelError("unrecognized network checkpoint format");
        std::size_t count = 0;
        in >> count;
        std::vector<int> sizes(count);
        for (auto& s : sizes) in >> s;
        Mlp net(sizes);
        for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
            for (double& v : net.w_[l]) in >> v;
            for (double& v : net.b_[l]) in >> v;
        }
        if (!in) throw ModelError("truncated network checkpoint");
        return net;
    }

  private:
    static double* locate_in(std::vector<std::vector<double>>& w,
                             std::vector<std::vector<double>>& b,
                             std::size_t i) {
        for (std::size_t l = 0; l < w.size(); ++l) {
            if (i < w[l].size()) return &w[l][i];
            i -= w[l].size();
            if (i < b[l].size()) return &b[l][i];
            i -= b[l].size();
        }
        throw ModelError("parameter index out of range");
    }
    static double* locate(Mlp& net, std::size_t i) {
        return locate_in(net.w_, net.b_, i);
    }
    static double* locate_grad(Mlp& net, std::size_t i) {
        return locate_in(net.gw_, net.gb_, i);
    }

    std::vector<int> sizes_;
    std::vector<std::vector<double>> w_, b_;   // row-major [out x in]
    std::vector<std::vector<double>> gw_, gb_; // gradient accumulators
};

inline int argmax_lowest(std::span<const double> values) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(values.size()); ++i)
        if (values[i] > values[best]) best = i; // ties keep the lowest index
    return best;
}

} // namespace dtmec
