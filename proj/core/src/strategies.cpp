#include "hfc/strategies.hpp"

#include <stdexcept>

namespace hfc {

ActionProfile propose_independent(Rng& rng, int n, int m) {
  ActionProfile profile(static_cast<std::size_t>(n));
  for (auto& a : profile) a = static_cast<Action>(uniform_index(rng, static_cast<std::uint64_t>(m)));
  return profile;
}

SharedLatent draw_latent(Rng& rng, int m) {
  return {static_cast<Action>(uniform_index(rng, static_cast<std::uint64_t>(m)))};
}

ActionProfile propose_given_latent(Rng& rng, SharedLatent latent, int n, int m, double q) {
  ActionProfile profile(static_cast<std::size_t>(n));
  for (auto& a : profile) {
    const bool copy = bernoulli(rng, q);
    const auto fresh = static_cast<Action>(uniform_index(rng, static_cast<std::uint64_t>(m)));
    a = copy ? latent.value : fresh;
  }
  return profile;
}

ActionProfile propose_shared_latent(Rng& rng, int n, int m, double q) {
  const auto latent = draw_latent(rng, m);
  return propose_given_latent(rng, latent, n, m, q);
}

ActionProfile roles_to_proposals(Bitstring bits, Rng& rng, int n, int m) {
  if (m < 2) throw std::invalid_argument("quantum role mapping requires m >= 2");
  ActionProfile profile(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto follower = 1 + static_cast<Action>(uniform_index(rng, static_cast<std::uint64_t>(m - 1)));
    profile[static_cast<std::size_t>(i)] = ((bits >> i) & 1U) ? kLeaderAction : follower;
  }
  return profile;
}

ActionProfile propose_quantum(Rng& quantum_rng, Rng& agent_rng, int n, int m, double lambda) {
  return roles_to_proposals(sample_outcome(quantum_rng, n, lambda), agent_rng, n, m);
}

ActionProfile propose_quantum(Rng& rng, int n, int m, double lambda) {
  return propose_quantum(rng, rng, n, m, lambda);
}

ProposalKernel proposal_kernel(Strategy strategy, int n, int m, double q, double lambda) {
  ProposalKernel kernel;
  kernel.n = n;
  kernel.m = m;
  const auto mm = static_cast<std::size_t>(m);

  switch (strategy) {
    case Strategy::independent: {
      kernel.conditionals.push_back(std::vector<double>(mm, 1.0 / m));
      kernel.terms.push_back({1.0, std::vector<int>(static_cast<std::size_t>(n), 0)});
      break;
    }
    case Strategy::shared_latent: {
      for (int latent = 0; latent < m; ++latent) {
        std::vector<double> law(mm, (1.0 - q) / m);
        law[static_cast<std::size_t>(latent)] += q;
        kernel.conditionals.push_back(std::move(law));
        kernel.terms.push_back({1.0 / m, std::vector<int>(static_cast<std::size_t>(n), latent)});
      }
      break;
    }
    case Strategy::quantum: {
      if (m < 2) throw std::invalid_argument("quantum strategy requires m >= 2");
      std::vector<double> follower(mm, 1.0 / (m - 1));
      follower[kLeaderAction] = 0.0;
      std::vector<double> leader(mm, 0.0);
      leader[kLeaderAction] = 1.0;
      kernel.conditionals = {std::move(follower), std::move(leader)};
      const auto dist = noisy_w_distribution(n, lambda);
      const auto probs = dist.probs();
      for (std::size_t b = 0; b < probs.size(); ++b) {
        if (probs[b] < kResourcePruneThreshold) continue;
        std::vector<int> laws(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) laws[static_cast<std::size_t>(i)] = static_cast<int>((b >> i) & 1U);
        kernel.terms.push_back({probs[b], std::move(laws)});
      }
      break;
    }
  }
  return kernel;
}

}  // namespace hfc
