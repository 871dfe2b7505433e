#include "hfc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hfc/config.hpp"

namespace hfc {

ProfileCode encode_profile(std::span<const Action> profile, int m) {
  ProfileCode code = 0;
  for (Action a : profile) {
    if (a < 0 || a >= m) throw std::out_of_range("action out of range");
    code = code * static_cast<ProfileCode>(m) + static_cast<ProfileCode>(a);
  }
  return code;
}

ActionProfile decode_profile(ProfileCode code, int n, int m) {
  ActionProfile profile(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    profile[static_cast<std::size_t>(i)] = static_cast<Action>(code % static_cast<ProfileCode>(m));
    code /= static_cast<ProfileCode>(m);
  }
  return profile;
}

JointHistogram::JointHistogram(int n, int m) : n_(n), m_(m) {
  if (n < 1 || m < 1) throw std::invalid_argument("histogram dimensions must be positive");
}

JointHistogram JointHistogram::from_codes(int n, int m, std::vector<ProfileCode> codes) {
  JointHistogram hist(n, m);
  std::sort(codes.begin(), codes.end());
  for (std::size_t i = 0; i < codes.size();) {
    std::size_t j = i;
    while (j < codes.size() && codes[j] == codes[i]) ++j;
    hist.entries_.emplace_back(codes[i], j - i);
    i = j;
  }
  hist.total_ = codes.size();
  return hist;
}

JointHistogram JointHistogram::from_entries(int n, int m, std::vector<Entry> entries) {
  JointHistogram hist(n, m);
  std::sort(entries.begin(), entries.end());
  for (const auto& [code, count] : entries) {
    if (count == 0) continue;
    if (!hist.entries_.empty() && hist.entries_.back().first == code) {
      hist.entries_.back().second += count;
    } else {
      hist.entries_.emplace_back(code, count);
    }
    hist.total_ += count;
  }
  return hist;
}

std::uint64_t JointHistogram::count(std::span<const Action> profile) const {
  const auto code = encode_profile(profile, m_);
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{code, 0});
  return (it != entries_.end() && it->first == code) ? it->second : 0;
}

void JointHistogram::merge(const JointHistogram& other) {
  if (other.n_ != n_ || other.m_ != m_) throw std::invalid_argument("histogram shape mismatch");
  std::vector<Entry> merged;
  merged.reserve(entries_.size() + other.entries_.size());
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() || b != other.entries_.end()) {
    if (b == other.entries_.end() || (a != entries_.end() && a->first < b->first)) {
      merged.push_back(*a++);
    } else if (a == entries_.end() || b->first < a->first) {
      merged.push_back(*b++);
    } else {
      merged.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  entries_ = std::move(merged);
  total_ += other.total_;
}

JointLaw to_law(const JointHistogram& hist) {
  if (hist.empty()) throw std::invalid_argument("empty histogram");
  JointLaw law{hist.n(), hist.m(), {}};
  law.cells.reserve(hist.entries().size());
  const auto total = static_cast<double>(hist.total());
  for (const auto& [code, count] : hist.entries()) {
    law.cells.emplace_back(code, static_cast<double>(count) / total);
  }
  return law;
}

namespace {

double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

double clip(double value) { return (value < 0.0 && value > -kNegativeClip) ? 0.0 : value; }

void require_pairs(const JointLaw& law) {
  if (law.n < 2) throw std::invalid_argument("metric requires at least two agents");
}

// Decodes each cell once and hands its digits to `visit`.
template <typename Visit>
void for_each_cell(const JointLaw& law, Visit&& visit) {
  std::vector<Action> digits(static_cast<std::size_t>(law.n));
  const auto m = static_cast<ProfileCode>(law.m);
  for (const auto& [code, prob] : law.cells) {
    ProfileCode c = code;
    for (int i = law.n - 1; i >= 0; --i) {
      digits[static_cast<std::size_t>(i)] = static_cast<Action>(c % m);
      c /= m;
    }
    visit(std::span<const Action>(digits), prob);
  }
}

}  // namespace

double entropy(std::span<const double> dist) {
  double total = 0.0;
  double h = 0.0;
  for (double p : dist) {
    if (p < 0.0) throw std::invalid_argument("entropy: negative probability");
    total += p;
    h += plogp(p);
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("entropy: not normalized");
  return h;
}

std::vector<std::vector<double>> agent_marginals(const JointLaw& law) {
  std::vector<std::vector<double>> marginals(static_cast<std::size_t>(law.n),
                                             std::vector<double>(static_cast<std::size_t>(law.m), 0.0));
  for_each_cell(law, [&](std::span<const Action> a, double prob) {
    for (std::size_t i = 0; i < a.size(); ++i) marginals[i][static_cast<std::size_t>(a[i])] += prob;
  });
  return marginals;
}

PairMatrix pairwise_joint(const JointLaw& law, int i, int j) {
  if (law.cells.empty()) throw std::invalid_argument("empty histogram");
  if (i == j || i < 0 || j < 0 || i >= law.n || j >= law.n) {
    throw std::invalid_argument("pairwise_joint: need two distinct agents in range");
  }
  PairMatrix pair{law.m, std::vector<double>(static_cast<std::size_t>(law.m) * static_cast<std::size_t>(law.m), 0.0)};
  for_each_cell(law, [&](std::span<const Action> a, double prob) {
    pair.cells[static_cast<std::size_t>(a[static_cast<std::size_t>(i)]) * static_cast<std::size_t>(law.m) +
               static_cast<std::size_t>(a[static_cast<std::size_t>(j)])] += prob;
  });
  return pair;
}

PairMatrix pairwise_joint(const JointHistogram& hist, int i, int j) {
  return pairwise_joint(to_law(hist), i, j);
}

double mutual_information(const PairMatrix& pair) {
  const auto m = static_cast<std::size_t>(pair.m);
  std::vector<double> rows(m, 0.0);
  std::vector<double> cols(m, 0.0);
  double joint = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      const double p = pair.cells[r * m + c];
      rows[r] += p;
      cols[c] += p;
      joint += plogp(p);
    }
  }
  double hr = 0.0;
  double hc = 0.0;
  for (std::size_t t = 0; t < m; ++t) {
    hr += plogp(rows[t]);
    hc += plogp(cols[t]);
  }
  return clip(hr + hc - joint);
}

MetricSet compute_metrics(const JointLaw& law) {
  require_pairs(law);
  if (law.cells.empty()) throw std::invalid_argument("empty histogram");
  const auto n = static_cast<std::size_t>(law.n);
  const auto m = static_cast<std::size_t>(law.m);
  const std::size_t pairs = n * (n - 1) / 2;

  std::vector<double> marginals(n * m, 0.0);
  std::vector<double> pair_cells(pairs * m * m, 0.0);
  double joint_entropy = 0.0;
  double coincidences = 0.0;  // sum over pairs of Pr[a_i = a_j]
  double all_equal = 0.0;

  for_each_cell(law, [&](std::span<const Action> a, double prob) {
    joint_entropy += plogp(prob);
    bool equal = true;
    std::size_t pair_index = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto ai = static_cast<std::size_t>(a[i]);
      marginals[i * m + ai] += prob;
      if (a[i] != a[0]) equal = false;
      for (std::size_t j = i + 1; j < n; ++j, ++pair_index) {
        const auto aj = static_cast<std::size_t>(a[j]);
        pair_cells[(pair_index * m + ai) * m + aj] += prob;
        if (ai == aj) coincidences += prob;
      }
    }
    if (equal) all_equal += prob;
  });

  MetricSet out;
  double sum_marginal_entropy = 0.0;
  out.marginal.assign(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < m; ++t) {
      sum_marginal_entropy += plogp(marginals[i * m + t]);
      out.marginal[t] += marginals[i * m + t];
    }
  }
  for (auto& x : out.marginal) x /= static_cast<double>(n);
  for (double x : out.marginal) out.product_coin += x * x;

  double mi_sum = 0.0;
  for (std::size_t k = 0; k < pairs; ++k) {
    PairMatrix pair{law.m, std::vector<double>(pair_cells.begin() + static_cast<std::ptrdiff_t>(k * m * m),
                                               pair_cells.begin() + static_cast<std::ptrdiff_t>((k + 1) * m * m))};
    mi_sum += mutual_information(pair);
  }

  out.apmi = clip(mi_sum / static_cast<double>(pairs));
  out.tc = clip(sum_marginal_entropy - joint_entropy);
  out.coin = coincidences / static_cast<double>(pairs);
  out.global_collision = all_equal;
  return out;
}

MetricSet compute_metrics(const JointHistogram& hist) { return compute_metrics(to_law(hist)); }

double apmi(const JointLaw& law) {
  require_pairs(law);
  double sum = 0.0;
  for (int i = 0; i < law.n; ++i) {
    for (int j = i + 1; j < law.n; ++j) sum += mutual_information(pairwise_joint(law, i, j));
  }
  return clip(2.0 * sum / (static_cast<double>(law.n) * (law.n - 1)));
}

double total_correlation(const JointLaw& law) {
  double joint = 0.0;
  for (const auto& cell : law.cells) joint += plogp(cell.second);
  double marginal = 0.0;
  for (const auto& row : agent_marginals(law)) {
    for (double p : row) marginal += plogp(p);
  }
  return clip(marginal - joint);
}

double pairwise_coincidence(const JointLaw& law) {
  require_pairs(law);
  double sum = 0.0;
  for_each_cell(law, [&](std::span<const Action> a, double prob) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = i + 1; j < a.size(); ++j) {
        if (a[i] == a[j]) sum += prob;
      }
    }
  });
  return 2.0 * sum / (static_cast<double>(law.n) * (law.n - 1));
}

double global_collision(const JointLaw& law) {
  require_pairs(law);
  double sum = 0.0;
  for_each_cell(law, [&](std::span<const Action> a, double prob) {
    if (std::all_of(a.begin(), a.end(), [&](Action x) { return x == a[0]; })) sum += prob;
  });
  return sum;
}

ProductBaseline product_baseline(const JointLaw& law) {
  require_pairs(law);
  ProductBaseline out;
  out.marginal.assign(static_cast<std::size_t>(law.m), 0.0);
  for (const auto& row : agent_marginals(law)) {
    for (std::size_t t = 0; t < row.size(); ++t) out.marginal[t] += row[t];
  }
  for (auto& x : out.marginal) x /= static_cast<double>(law.n);
  for (double x : out.marginal) out.product_coin += x * x;
  return out;
}

double apmi(const JointHistogram& hist) { return apmi(to_law(hist)); }
double total_correlation(const JointHistogram& hist) { return total_correlation(to_law(hist)); }
double pairwise_coincidence(const JointHistogram& hist) { return pairwise_coincidence(to_law(hist)); }
double global_collision(const JointHistogram& hist) { return global_collision(to_law(hist)); }
ProductBaseline product_baseline(const JointHistogram& hist) { return product_baseline(to_law(hist)); }

void write_histogram(std::ostream& out, const JointHistogram& hist) {
  out << kHistogramSchema << " n=" << hist.n() << " m=" << hist.m() << "\n";
  out << "profile,count\n";
  for (const auto& [code, count] : hist.entries()) {
    const auto profile = decode_profile(code, hist.n(), hist.m());
    for (std::size_t i = 0; i < profile.size(); ++i) {
      if (i) out << '-';
      out << profile[i] + 1;
    }
    out << ',' << count << '\n';
  }
}

JointHistogram read_histogram(std::istream& in, int n, int m) {
  std::string line;
  std::vector<JointHistogram::Entry> entries;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "profile,count") throw std::runtime_error("histogram: bad header '" + line + "'");
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("histogram: bad row '" + line + "'");
    ActionProfile profile;
    std::stringstream fields(line.substr(0, comma));
    std::string token;
    while (std::getline(fields, token, '-')) profile.push_back(static_cast<Action>(parse_int(token)) - 1);
    if (static_cast<int>(profile.size()) != n) throw std::runtime_error("histogram: wrong profile length");
    entries.emplace_back(encode_profile(profile, m), parse_uint(line.substr(comma + 1)));
  }
  return JointHistogram::from_entries(n, m, std::move(entries));
}

}  // namespace hfc
