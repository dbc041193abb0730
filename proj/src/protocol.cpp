#include "fockqkd/protocol.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

namespace fockqkd {

namespace {

constexpr std::uint64_t kBlockRounds = 1 << 14;
constexpr double kZ95 = 1.959963984540054;

int raw_bit(const DetectionOutcome& outcome) {
  return outcome.assigned_bit ? static_cast<int>(*outcome.assigned_bit) : -1;
}

}  // namespace

void SessionConfig::validate() const {
  if (rounds < 1) {
    throw std::invalid_argument("rounds: must be at least 1");
  }
  switch (source.kind) {
    case SourceKind::kSinglet:
      break;
    case SourceKind::kSpdc:
      try {
        source.spdc.validate();
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("source: ") + e.what());
      }
      break;
    case SourceKind::kAttackMixture:
      if (!(source.attack_fraction >= 0.0 && source.attack_fraction <= 1.0)) {
        throw std::invalid_argument("source.p: must lie in [0, 1]");
      }
      break;
  }
  if (eve.kind == EveKind::kSplitAttack && eve.attack.max_attempts < 1) {
    throw std::invalid_argument("eve.max_attempts: must be at least 1");
  }
  if (eve.kind == EveKind::kInterceptResend && source.kind == SourceKind::kSpdc) {
    throw std::invalid_argument(
        "eve: intercept-resend needs at most one photon per channel; use a singlet or "
        "attack_mixture source");
  }
  if (basis_set.empty() || basis_set.size() > 255) {
    throw std::invalid_argument("basis_set: must hold between 1 and 255 bases");
  }
  const auto names = basis_names();
  if (std::set<std::string>(names.begin(), names.end()).size() != names.size()) {
    throw std::invalid_argument("basis_set: bases must be distinct");
  }
}

std::vector<std::string> SessionConfig::basis_names() const {
  std::vector<std::string> names;
  for (const auto& basis : basis_set) {
    names.push_back(basis.name());
  }
  return names;
}

SessionTally::SessionTally(std::size_t basis_count)
    : sifted_(basis_count, 0), errors_(basis_count, 0) {}

void SessionTally::add(const RoundRecord& record) {
  ++rounds_;
  for (DetectionKind kind : {record.alice_outcome, record.bob_outcome}) {
    if (kind == DetectionKind::kNoClick) {
      ++no_clicks_;
    } else if (kind == DetectionKind::kDoubleClick) {
      ++double_clicks_;
    }
  }
  if (record.source_tag == SourceTag::kAttack || record.source_tag == SourceTag::kSpdcSplit) {
    ++attack_rounds_;
  } else if (record.source_tag == SourceTag::kSpdcSplitFailed) {
    ++split_failures_;
  }
  if (!record.sifted) {
    return;
  }
  ++sifted_.at(record.alice_basis);
  if (record.alice_bit != record.bob_bit) {
    ++errors_.at(record.alice_basis);
  }
  if (record.eve.measured) {
    ++eve_joint_[{record.alice_bit, record.eve.code()}];
  }
}

void SessionTally::merge(const SessionTally& other) {
  if (other.sifted_.size() != sifted_.size()) {
    throw std::invalid_argument("cannot merge tallies over different basis sets");
  }
  rounds_ += other.rounds_;
  for (std::size_t i = 0; i < sifted_.size(); ++i) {
    sifted_[i] += other.sifted_[i];
    errors_[i] += other.errors_[i];
  }
  double_clicks_ += other.double_clicks_;
  no_clicks_ += other.no_clicks_;
  attack_rounds_ += other.attack_rounds_;
  split_failures_ += other.split_failures_;
  for (const auto& [key, count] : other.eve_joint_) {
    eve_joint_[key] += count;
  }
}

SessionReport SessionTally::report(const std::vector<std::string>& basis_names) const {
  SessionReport report;
  report.rounds = rounds_;
  report.double_click_count = double_clicks_;
  report.no_click_count = no_clicks_;
  report.attack_rounds = attack_rounds_;
  report.split_failures = split_failures_;
  for (std::size_t i = 0; i < sifted_.size(); ++i) {
    BasisBreakdown basis{basis_names.at(i), sifted_[i], errors_[i], 0.0};
    if (basis.sifted > 0) {
      basis.qber = static_cast<double>(basis.errors) / static_cast<double>(basis.sifted);
    }
    report.per_basis.push_back(basis);
    report.sifted_length += sifted_[i];
    report.error_count += errors_[i];
  }
  if (report.sifted_length > 0) {
    const double n = static_cast<double>(report.sifted_length);
    report.qber_hat = static_cast<double>(report.error_count) / n;
    report.qber_half_width = kZ95 * std::sqrt(report.qber_hat * (1.0 - report.qber_hat) / n);
  }
  const MutualInformation mi = estimate_mutual_information(eve_joint_);
  report.leak_bound.eve_info = mi.bits;
  report.leak_bound.bound = binary_entropy(report.qber_hat);
  report.leak_bound.margin = report.leak_bound.bound - report.leak_bound.eve_info;
  report.eve_info_sigma = mi.sigma;
  return report;
}

MutualInformation estimate_mutual_information(
    const std::map<std::pair<int, int>, std::uint64_t>& counts) {
  std::map<int, double> row;
  std::map<int, double> column;
  double total = 0.0;
  for (const auto& [key, count] : counts) {
    row[key.first] += static_cast<double>(count);
    column[key.second] += static_cast<double>(count);
    total += static_cast<double>(count);
  }
  MutualInformation out;
  if (total == 0.0) {
    return out;
  }
  double first = 0.0;
  double second = 0.0;
  for (const auto& [key, count] : counts) {
    if (count == 0) {
      continue;
    }
    const double n = static_cast<double>(count);
    const double pointwise = std::log2(n * total / (row[key.first] * column[key.second]));
    first += n / total * pointwise;
    second += n / total * pointwise * pointwise;
  }
  out.bits = std::max(0.0, first);
  out.sigma = std::sqrt(std::max(0.0, second - first * first) / total);
  return out;
}

SessionSimulator::SessionSimulator(SessionConfig config) : config_(std::move(config)) {
  config_.validate();
  const RegistryPtr registry = attack_registry();
  singlet_ = singlet_state(registry);
  attack_state_ = attack_four_photon(registry);
  if (config_.source.kind == SourceKind::kSpdc) {
    spdc_ = spdc_state(config_.source.spdc, registry);
  }
}

RoundRecord SessionSimulator::simulate_round(std::uint64_t round_idx) const {
  RandomStream rng = RandomStream::derive(config_.seed, round_idx);
  const auto& bases = config_.basis_set;
  auto draw_basis = [&]() {
    const auto index = static_cast<std::size_t>(rng.uniform() * static_cast<double>(bases.size()));
    return static_cast<std::uint8_t>(std::min(index, bases.size() - 1));
  };

  RoundRecord record;
  record.round_idx = round_idx;

  StateVector state;
  switch (config_.source.kind) {
    case SourceKind::kSinglet:
      state = singlet_;
      record.source_tag = SourceTag::kSinglet;
      break;
    case SourceKind::kAttackMixture:
      if (rng.uniform() < config_.source.attack_fraction) {
        state = attack_state_;
        record.source_tag = SourceTag::kAttack;
      } else {
        state = singlet_;
        record.source_tag = SourceTag::kSinglet;
      }
      break;
    case SourceKind::kSpdc:
      state = spdc_;
      record.source_tag = SourceTag::kSpdc;
      break;
  }

  switch (config_.eve.kind) {
    case EveKind::kNone:
      break;
    case EveKind::kSplitAttack: {
      GatedAttackResult attack = photon_splitting_attack(state, config_.eve.attack, rng);
      state = std::move(attack.state);
      if (attack.split_attempted) {
        record.source_tag =
            attack.split_succeeded ? SourceTag::kSpdcSplit : SourceTag::kSpdcSplitFailed;
      }
      break;
    }
    case EveKind::kInterceptResend: {
      const BasisAngle eve_basis =
          config_.eve.intercept_basis ? *config_.eve.intercept_basis : bases[draw_basis()];
      state = intercept_resend(state, kBobChannel, eve_basis, rng);
      break;
    }
  }

  record.alice_basis = draw_basis();
  record.bob_basis = draw_basis();
  const Detection alice = threshold_detect(state, kAliceChannel, bases[record.alice_basis], rng);
  const Detection bob =
      threshold_detect(alice.post_state, kBobChannel, bases[record.bob_basis], rng);
  record.alice_outcome = alice.outcome.kind;
  record.bob_outcome = bob.outcome.kind;
  record.alice_bit = raw_bit(alice.outcome);
  const int bob_raw = raw_bit(bob.outcome);
  record.bob_bit = bob_raw < 0 ? -1 : 1 - bob_raw;

  const bool any_double = alice.outcome.kind == DetectionKind::kDoubleClick ||
                          bob.outcome.kind == DetectionKind::kDoubleClick;
  record.sifted = record.alice_basis == record.bob_basis && alice.outcome.clicked() &&
                  bob.outcome.clicked() &&
                  !(any_double && config_.double_click_policy == DoubleClickPolicy::kDiscard);

  if (record.sifted) {
    // Eve reads her stored photons after the bases are announced.
    const BasisAngle basis = bases[record.alice_basis];
    const Detection e1 = threshold_detect(bob.post_state, kEveAliceChannel, basis, rng);
    const Detection e2 = threshold_detect(e1.post_state, kEveBobChannel, basis, rng);
    record.eve = {true, e1.outcome.kind, e2.outcome.kind};
  }
  return record;
}

SessionReport SessionSimulator::run(std::ostream* transcript) const {
  const auto names = config_.basis_names();
  SessionTally tally(names.size());
  Fnv1a64 checksum;
  if (transcript != nullptr) {
    const std::string header = std::string(kTranscriptHeader) + "\n";
    checksum.update(header);
    *transcript << header;
  }

  unsigned threads = config_.threads != 0 ? config_.threads : std::thread::hardware_concurrency();
  threads = std::max(1U, threads);
  std::vector<RoundRecord> block;
  for (std::uint64_t start = 0; start < config_.rounds; start += kBlockRounds) {
    const std::uint64_t count = std::min(kBlockRounds, config_.rounds - start);
    block.assign(count, RoundRecord{});
    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
          try {
            for (std::uint64_t i = w; i < count; i += workers) {
              block[i] = simulate_round(start + i);
            }
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto& error : errors) {
      if (error) {
        std::rethrow_exception(error);
      }
    }
    for (const auto& record : block) {
      tally.add(record);
      if (transcript != nullptr) {
        const std::string line = format_record(record, names) + "\n";
        checksum.update(line);
        *transcript << line;
      }
    }
  }
  if (transcript != nullptr) {
    *transcript << "checksum," << to_hex(checksum.value()) << "\n";
    transcript->flush();
  }
  return tally.report(names);
}

SessionReport run_session(const SessionConfig& config, std::ostream* transcript) {
  return SessionSimulator(config).run(transcript);
}

ReplayResult replay(const SessionConfig& config, std::istream& transcript) {
  config.validate();
  const auto names = config.basis_names();
  SessionTally tally(names.size());
  Fnv1a64 checksum;

  std::string line;
  std::size_t line_number = 1;
  if (!std::getline(transcript, line) || line != kTranscriptHeader) {
    throw TranscriptError(1, "missing or malformed header");
  }
  checksum.update(line + "\n");

  std::uint64_t expected_round = 0;
  std::optional<std::string> recorded;
  while (std::getline(transcript, line)) {
    ++line_number;
    if (recorded) {
      if (!line.empty()) {
        throw TranscriptError(line_number, "content after checksum line");
      }
      continue;
    }
    if (line.rfind("checksum,", 0) == 0) {
      recorded = line.substr(9);
      if (expected_round != config.rounds) {
        throw TranscriptError(line_number, "transcript holds " + std::to_string(expected_round) +
                                               " rounds, config expects " +
                                               std::to_string(config.rounds));
      }
      continue;
    }
    const RoundRecord record = parse_record(line, line_number, names);
    if (record.round_idx != expected_round) {
      throw TranscriptError(line_number, "expected round " + std::to_string(expected_round));
    }
    ++expected_round;
    tally.add(record);
    checksum.update(line + "\n");
  }
  if (!recorded) {
    throw TranscriptError(line_number + 1, "missing checksum line");
  }

  ReplayResult result;
  result.report = tally.report(names);
  result.recorded_checksum = *recorded;
  result.computed_checksum = to_hex(checksum.value());
  result.checksum_ok = result.recorded_checksum == result.computed_checksum;
  return result;
}

ReplayResult replay(const SessionConfig& config, const std::filesystem::path& transcript_path) {
  std::ifstream in(transcript_path, std::ios::binary);
  if (!in) {
    throw std::ios_base::failure("cannot open transcript " + transcript_path.string());
  }
  return replay(config, in);
}

}  // namespace fockqkd
