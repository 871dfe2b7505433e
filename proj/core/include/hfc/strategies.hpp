#pragma once

#include <vector>

#include "hfc/config.hpp"
#include "hfc/quantum.hpp"
#include "hfc/rng.hpp"
#include "hfc/world.hpp"

namespace hfc {

/// The leader (bit 1) target under the role mapping.
inline constexpr Action kLeaderAction = 0;

struct SharedLatent {
  Action value = 0;
};

// None of the proposal rules below receives the hidden field or any round
// history; that is what keeps the strategies communication-free.

ActionProfile propose_independent(Rng& rng, int n, int m);

SharedLatent draw_latent(Rng& rng, int m);

/// Each agent copies the latent with probability q, otherwise draws uniformly
/// over the full alphabet (which may land on the latent). Consumes two
/// variates per agent regardless of q.
ActionProfile propose_given_latent(Rng& rng, SharedLatent latent, int n, int m, double q);

/// Single-generator convenience form: latent first, then the agents.
ActionProfile propose_shared_latent(Rng& rng, int n, int m, double q);

/// Local role mapping: bit 1 proposes the leader target, bit 0 proposes a
/// uniform draw from the remaining m-1 targets. One variate per agent.
ActionProfile roles_to_proposals(Bitstring bits, Rng& rng, int n, int m);

ActionProfile propose_quantum(Rng& quantum_rng, Rng& agent_rng, int n, int m, double lambda);
ActionProfile propose_quantum(Rng& rng, int n, int m, double lambda);

/// One value of the pre-shared resource together with each agent's
/// conditional proposal law given it.
struct ResourceTerm {
  double weight = 0.0;
  /// Indices into ProposalKernel::conditionals, one per agent.
  std::vector<int> agent_law;
};

/// Two-stage description of a strategy: a law over resources and, given the
/// resource, conditionally independent per-agent proposal laws.
struct ProposalKernel {
  int n = 0;
  int m = 0;
  std::vector<std::vector<double>> conditionals;
  std::vector<ResourceTerm> terms;
};

/// Resource bitstrings of the quantum kernel below this mass are dropped.
inline constexpr double kResourcePruneThreshold = 1e-15;

/// Independent: one unit resource. Shared latent: L over m values.
/// Quantum: bitstrings of the noisy W law.
ProposalKernel proposal_kernel(Strategy strategy, int n, int m, double q, double lambda);

}  // namespace hfc
