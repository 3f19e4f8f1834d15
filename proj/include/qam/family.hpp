#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "qam/arrow_generator.hpp"
#include "qam/errors.hpp"
#include "qam/generator.hpp"

namespace qam {

/// Index-to-generator sequence (f_n), n >= 1, over a shared domain.
/// Construction rules must be pure; produced generators are memoized, so
/// repeated at(n) calls are observationally identical and cheap.
class GeneratorFamily {
  public:
    GeneratorFamily(std::string label, Interval domain, std::function<Generator(int)> make)
        : label_(std::move(label)), domain_(domain),
          state_(std::make_shared<State>(std::move(make))) {}

    const Generator& at(int n) const {
        if (n < 1) throw InvalidParameter("family index must satisfy n >= 1");
        std::unique_lock lock(state_->mu);
        auto it = state_->memo.find(n);
        if (it != state_->memo.end()) return it->second;
        lock.unlock();
        Generator g = state_->make(n); // built outside the lock; make is pure
        lock.lock();
        return state_->memo.emplace(n, std::move(g)).first->second;
    }

    const Interval& domain() const { return domain_; }
    const std::string& label() const { return label_; }

  private:
    struct State {
        explicit State(std::function<Generator(int)> m) : make(std::move(m)) {}
        std::function<Generator(int)> make;
        std::mutex mu;
        std::map<int, Generator> memo;
    };

    std::string label_;
    Interval domain_;
    std::shared_ptr<State> state_;
};

/// f_n(x) = e^{t_n x} with a caller-supplied rate rule.
inline GeneratorFamily exp_seq_family(Interval domain, std::function<double(int)> rate,
                                      std::string label = "exp-seq") {
    return GeneratorFamily(std::move(label), domain, [domain, rate = std::move(rate)](int n) {
        return exponential_generator(rate(n), domain);
    });
}

/// t_n = scale * n.
inline GeneratorFamily exp_seq_family(Interval domain, double scale = 1.0) {
    if (scale == 0.0) throw InvalidParameter("exp-seq rate scale must be nonzero");
    return exp_seq_family(domain, [scale](int n) { return scale * n; },
                          "exp-seq:" + std::to_string(scale));
}

/// f_n(x) = x^{p_n} with a caller-supplied exponent rule.
inline GeneratorFamily power_seq_family(Interval domain, std::function<double(int)> exponent,
                                        std::string label = "power-seq") {
    return GeneratorFamily(std::move(label), domain, [domain, exponent = std::move(exponent)](int n) {
        return power_generator(exponent(n), domain);
    });
}

/// p_n = scale * n.
inline GeneratorFamily power_seq_family(Interval domain, double scale = 1.0) {
    if (scale == 0.0) throw InvalidParameter("power-seq exponent scale must be nonzero");
    return power_seq_family(domain, [scale](int n) { return scale * n; },
                            "power-seq:" + std::to_string(scale));
}

/// f_n = g for every n; exercises the non-max failure mode.
inline GeneratorFamily constant_family(Generator g) {
    Interval domain = g.domain;
    std::string label = "constant(" + g.label + ")";
    return GeneratorFamily(std::move(label), domain,
                           [g = std::move(g)](int) { return g; });
}

/// Family whose f_n is reconstructed from the Arrow profile stored for n.
inline GeneratorFamily arrow_profile_seq_family(std::string label,
                                                std::map<int, ArrowProfile> profiles,
                                                double anchor, QuadratureConfig quad = {}) {
    if (profiles.empty()) throw InvalidParameter("arrow family needs at least one profile");
    Interval domain = profiles.begin()->second.domain();
    auto store = std::make_shared<const std::map<int, ArrowProfile>>(std::move(profiles));
    return GeneratorFamily(std::move(label), domain, [store, anchor, quad](int n) {
        auto it = store->find(n);
        if (it == store->end())
            throw InvalidParameter("arrow family has no profile for n = " + std::to_string(n));
        return generator_from_arrow(it->second, anchor, quad);
    });
}

enum class FamilyKind { power_seq, exp_seq, constant, arrow_profile_seq };

} // namespace qam
