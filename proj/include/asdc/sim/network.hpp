#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "asdc/sim/block.hpp"
#include "asdc/sim/config.hpp"
#include "asdc/sim/delay_line.hpp"
#include "asdc/sim/error.hpp"
#include "asdc/sim/rk4.hpp"
#include "asdc/sim/signal.hpp"

namespace asdc::sim {

using BlockId = std::size_t;
using HeldId = std::size_t;
using BufferId = std::size_t;

class NetworkView;

/// Fixed-step co-simulation of interconnected DynamicBlocks on a shared RK4
/// clock. Inputs can be wired to block outputs (stage-exact), analytic time
/// functions, per-step held samples, delayed taps of block outputs, or
/// externally pushed sample buffers. Algebraic loops through feedthrough
/// blocks are rejected at run time setup; runs are bitwise deterministic.
class Network {
public:
    using Probe = std::function<double(const NetworkView&)>;
    using PrestepHook = std::function<void(NetworkView&, double t, std::size_t step)>;

    BlockId add_block(DynamicBlock blk) {
        blocks_.push_back(std::move(blk));
        wires_.emplace_back(blocks_.back().n_inputs);
        return blocks_.size() - 1;
    }

    HeldId add_held(std::string name, double initial = 0.0) {
        held_names_.push_back(std::move(name));
        held_.push_back(initial);
        return held_.size() - 1;
    }

    /// Sample buffer filled from outside (through the view) and read with a
    /// transport delay.
    BufferId add_buffer(std::string name, double delay, double prehistory = 0.0) {
        buffer_names_.push_back(std::move(name));
        buffers_.emplace_back(delay, prehistory);
        return buffers_.size() - 1;
    }

    void wire_output(BlockId dst, std::size_t port, BlockId src) {
        wire_at(dst, port) = BlockWire{src};
    }
    void wire_signal(BlockId dst, std::size_t port, std::function<double(double)> fn) {
        wire_at(dst, port) = SignalWire{std::move(fn)};
    }
    void wire_held(BlockId dst, std::size_t port, HeldId h) { wire_at(dst, port) = HeldWire{h}; }
    void wire_buffer(BlockId dst, std::size_t port, BufferId buf) {
        wire_at(dst, port) = BufferWire{buf};
    }
    /// Tap src's output at grid times and read it delayed. Requires
    /// delay >= dt so stage reads never run ahead of the recorded history.
    void wire_delayed(BlockId dst, std::size_t port, BlockId src, double delay,
                      double prehistory = 0.0) {
        taps_.push_back(Tap{src, DelayLine(delay, prehistory)});
        wire_at(dst, port) = TapWire{taps_.size() - 1};
    }

    void add_probe(std::string name, Probe probe) {
        probes_.emplace_back(std::move(name), std::move(probe));
    }
    void probe_output(std::string name, BlockId src);
    void set_prestep(PrestepHook hook) { prestep_ = std::move(hook); }

    std::map<std::string, Signal> run(const SimConfig& cfg);

private:
    struct BlockWire {
        BlockId src;
    };
    struct SignalWire {
        std::function<double(double)> fn;
    };
    struct HeldWire {
        HeldId id;
    };
    struct BufferWire {
        BufferId id;
    };
    struct TapWire {
        std::size_t tap;
    };
    using Wire = std::variant<std::monostate, BlockWire, SignalWire, HeldWire, BufferWire, TapWire>;
    struct Tap {
        BlockId src;
        DelayLine line;
    };

    Wire& wire_at(BlockId dst, std::size_t port) {
        if (dst >= blocks_.size() || port >= wires_[dst].size())
            throw std::invalid_argument("Network: wire target out of range");
        return wires_[dst][port];
    }

    void validate_wiring() const;
    void check_algebraic_loops() const;

    // lazy stage evaluation of block outputs with cycle guard
    struct EvalScratch {
        std::vector<double> value;
        std::vector<char> state;  // 0 = fresh, 1 = visiting, 2 = done
        std::vector<Eigen::VectorXd> inputs;
        std::vector<Eigen::VectorXd> dx;
    };

    void ensure_scratch(EvalScratch& es) const {
        if (es.inputs.size() != blocks_.size()) {
            es.value.assign(blocks_.size(), 0.0);
            es.state.assign(blocks_.size(), 0);
            es.inputs.resize(blocks_.size());
            es.dx.resize(blocks_.size());
            for (BlockId b = 0; b < blocks_.size(); ++b) {
                es.inputs[b].resize(static_cast<Eigen::Index>(blocks_[b].n_inputs));
                es.dx[b].resize(static_cast<Eigen::Index>(blocks_[b].state_dim()));
            }
        }
    }

    double block_output(BlockId id, double t, const Eigen::VectorXd& X, EvalScratch& es) const;
    void gather_inputs(BlockId id, double t, const Eigen::VectorXd& X, EvalScratch& es,
                       Eigen::VectorXd& u) const;
    void derivative(double t, const Eigen::VectorXd& X, Eigen::VectorXd& dX,
                    EvalScratch& es) const;

    std::vector<DynamicBlock> blocks_;
    std::vector<std::vector<Wire>> wires_;
    std::vector<Tap> taps_;
    std::vector<double> held_;
    std::vector<std::string> held_names_;
    std::vector<DelayLine> buffers_;
    std::vector<std::string> buffer_names_;
    std::vector<std::pair<std::string, Probe>> probes_;
    PrestepHook prestep_;
    std::vector<Eigen::Index> offsets_;

    friend class NetworkView;
};

/// Read/write access to a running network at a grid instant: block states and
/// outputs, held slots, external buffers.
class NetworkView {
public:
    double t() const { return t_; }

    Eigen::VectorXd::ConstSegmentReturnType state(BlockId id) const {
        return X_->segment(net_->offsets_[id],
                           static_cast<Eigen::Index>(net_->blocks_[id].state_dim()));
    }

    double output(BlockId id) const {
        Network::EvalScratch es;
        return net_->block_output(id, t_, *X_, es);
    }

    double held(HeldId id) const { return net_->held_[id]; }
    void set_held(HeldId id, double v) { net_->held_[id] = v; }

    void push_buffer(BufferId id, double time, double value) {
        net_->buffers_[id].push(time, value);
    }
    double buffer_sample(BufferId id, double time) const {
        return net_->buffers_[id].sample(time);
    }

private:
    NetworkView(Network* net, double t, const Eigen::VectorXd* X) : net_(net), t_(t), X_(X) {}
    Network* net_;
    double t_;
    const Eigen::VectorXd* X_;
    friend class Network;
};

inline void Network::probe_output(std::string name, BlockId src) {
    add_probe(std::move(name), [src](const NetworkView& v) { return v.output(src); });
}

inline void Network::validate_wiring() const {
    for (BlockId b = 0; b < blocks_.size(); ++b)
        for (std::size_t p = 0; p < wires_[b].size(); ++p)
            if (std::holds_alternative<std::monostate>(wires_[b][p]))
                throw std::invalid_argument("Network: input " + std::to_string(p) + " of block '" +
                                            blocks_[b].name + "' is not wired");
}

inline void Network::check_algebraic_loops() const {
    // D's output depends instantaneously on S's output iff D has feedthrough
    // and one of its ports is wired to S. A cycle in that relation is an
    // algebraic loop.
    std::vector<char> mark(blocks_.size(), 0);  // 0 fresh, 1 on stack, 2 done
    std::function<void(BlockId)> dfs = [&](BlockId d) {
        mark[d] = 1;
        if (blocks_[d].feedthrough) {
            for (const Wire& w : wires_[d]) {
                if (const auto* bw = std::get_if<BlockWire>(&w)) {
                    if (mark[bw->src] == 1)
                        throw std::invalid_argument("Network: algebraic loop through block '" +
                                                    blocks_[bw->src].name + "'");
                    if (mark[bw->src] == 0) dfs(bw->src);
                }
            }
        }
        mark[d] = 2;
    };
    for (BlockId b = 0; b < blocks_.size(); ++b)
        if (mark[b] == 0) dfs(b);
}

inline void Network::gather_inputs(BlockId id, double t, const Eigen::VectorXd& X, EvalScratch& es,
                                   Eigen::VectorXd& u) const {
    const auto& ws = wires_[id];
    for (std::size_t p = 0; p < ws.size(); ++p) {
        const Wire& w = ws[p];
        if (const auto* bw = std::get_if<BlockWire>(&w))
            u(static_cast<Eigen::Index>(p)) = block_output(bw->src, t, X, es);
        else if (const auto* sw = std::get_if<SignalWire>(&w))
            u(static_cast<Eigen::Index>(p)) = sw->fn(t);
        else if (const auto* hw = std::get_if<HeldWire>(&w))
            u(static_cast<Eigen::Index>(p)) = held_[hw->id];
        else if (const auto* fw = std::get_if<BufferWire>(&w))
            u(static_cast<Eigen::Index>(p)) = buffers_[fw->id].sample(t);
        else if (const auto* tw = std::get_if<TapWire>(&w))
            u(static_cast<Eigen::Index>(p)) = taps_[tw->tap].line.sample(t);
    }
}

inline double Network::block_output(BlockId id, double t, const Eigen::VectorXd& X,
                                    EvalScratch& es) const {
    ensure_scratch(es);
    if (es.state[id] == 2) return es.value[id];
    if (es.state[id] == 1)
        throw SimulationError("algebraic loop hit at evaluation", t, blocks_[id].name);
    es.state[id] = 1;

    const DynamicBlock& blk = blocks_[id];
    Eigen::VectorXd& u = es.inputs[id];
    if (blk.feedthrough) gather_inputs(id, t, X, es, u);
    const auto xs = X.segment(offsets_[id], static_cast<Eigen::Index>(blk.state_dim()));
    es.value[id] = blk.output(t, xs, u);
    es.state[id] = 2;
    return es.value[id];
}

inline void Network::derivative(double t, const Eigen::VectorXd& X, Eigen::VectorXd& dX,
                                EvalScratch& es) const {
    ensure_scratch(es);
    es.state.assign(blocks_.size(), 0);
    for (BlockId b = 0; b < blocks_.size(); ++b) {
        const DynamicBlock& blk = blocks_[b];
        if (blk.state_dim() == 0) continue;
        Eigen::VectorXd& u = es.inputs[b];
        gather_inputs(b, t, X, es, u);
        blk.derivative(t, X.segment(offsets_[b], static_cast<Eigen::Index>(blk.state_dim())), u,
                       es.dx[b]);
        dX.segment(offsets_[b], static_cast<Eigen::Index>(blk.state_dim())) = es.dx[b];
    }
}

inline std::map<std::string, Signal> Network::run(const SimConfig& cfg) {
    cfg.validate();
    validate_wiring();
    check_algebraic_loops();
    for (const Tap& tap : taps_)
        if (tap.line.delay() < cfg.dt)
            throw std::invalid_argument("Network: delayed tap on block '" + blocks_[tap.src].name +
                                        "' needs delay >= dt; wire the output directly instead");

    offsets_.assign(blocks_.size(), 0);
    Eigen::Index total = 0;
    for (BlockId b = 0; b < blocks_.size(); ++b) {
        offsets_[b] = total;
        total += static_cast<Eigen::Index>(blocks_[b].state_dim());
    }

    Eigen::VectorXd X(total);
    for (BlockId b = 0; b < blocks_.size(); ++b)
        X.segment(offsets_[b], static_cast<Eigen::Index>(blocks_[b].state_dim())) = blocks_[b].x0;

    const std::size_t n_steps = cfg.step_count();
    std::vector<std::vector<double>> probe_values(probes_.size());
    for (auto& pv : probe_values) pv.reserve(n_steps + 1);

    EvalScratch es;
    Rk4Workspace ws;
    Eigen::VectorXd u_scratch;

    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        NetworkView view(this, t, &X);
        if (prestep_) prestep_(view, t, k);

        if (k == 0) {
            EvalScratch es0;
            for (Tap& tap : taps_) tap.line.push(0.0, block_output(tap.src, 0.0, X, es0));
        }

        for (std::size_t p = 0; p < probes_.size(); ++p)
            probe_values[p].push_back(probes_[p].second(view));

        if (k == n_steps) break;

        rk4_step_inplace(
            [&](double ts, const Eigen::VectorXd& Xs, Eigen::VectorXd& dXs) {
                derivative(ts, Xs, dXs, es);
            },
            t, cfg.dt, X, ws);

        const double t_next = static_cast<double>(k + 1) * cfg.dt;
        if (!X.allFinite()) {
            for (BlockId b = 0; b < blocks_.size(); ++b)
                if (!X.segment(offsets_[b], static_cast<Eigen::Index>(blocks_[b].state_dim()))
                         .allFinite())
                    throw SimulationError("non-finite state component", t_next, blocks_[b].name);
        }

        EvalScratch esg;
        for (Tap& tap : taps_) tap.line.push(t_next, block_output(tap.src, t_next, X, esg));
    }

    std::map<std::string, Signal> out;
    for (std::size_t p = 0; p < probes_.size(); ++p)
        out[probes_[p].first] = Signal{cfg.dt, 0.0, std::move(probe_values[p])};
    return out;
}

/// Spec-level entry point: advance the whole network on the shared clock and
/// return every probe as a Signal.
inline std::map<std::string, Signal> run_network(Network& net, const SimConfig& cfg) {
    return net.run(cfg);
}

}  // namespace asdc::sim
