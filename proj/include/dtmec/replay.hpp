#pragma once

#include <vector>

#include "dtmec/common.hpp"
#include "dtmec/rng.hpp"

namespace dtmec {

struct Transition {
    std::vector<double> state;
    int action = 0;
    double reward = 0.0;
    std::vector<double> next_state;
    bool done = false;
};

// Fixed-capacity ring of transitions. Minibatches are only drawn once the
// memory has filled, uniformly without replacement within a batch.
class ReplayMemory {
  public:
    explicit ReplayMemory(std::size_t capacity) : capacity_(capacity) {
        if (capacity_ == 0) throw ModelError("replay capacity must be >= 1");
        ring_.reserve(capacity_);
    }

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return ring_.size(); }
    bool full() const { return ring_.size() == capacity_; }

    void push(Transition t) {
        if (ring_.size() < capacity_) {
            ring_.push_back(std::move(t));
        } else {
            ring_[next_] = std::move(t);
        }
        next_ = (next_ + 1) % capacity_;
    }

    const Transition& at(std::size_t i) const { return ring_[i]; }

    // Partial Fisher-Yates over the index scratch.
    std::vector<const Transition*> sample(std::size_t batch, RngStream& rng) {
        if (batch > ring_.size())
            throw ModelError("batch larger than replay contents");
        if (scratch_.size() != ring_.size()) {
            scratch_.resize(ring_.size());
            for (std::size_t i = 0; i < scratch_.size(); ++i) scratch_[i] = i;
        }
        std::vector<const Transition*> out;
        out.reserve(batch);
        for (std::size_t i = 0; i < batch; ++i) {
            const std::size_t j = i + rng.below(scratch_.size() - i);
            std::swap(scratch_[i], scratch_[j]);
            out.push_back(&ring_[scratch_[i]]);
        }
        return out;
    }

  private:
    std::size_t capacity_;
    std::size_t next_ = 0;
    std::vector<Transition> ring_;
    std::vector<std::size_t> scratch_;
};

} // namespace dtmec
