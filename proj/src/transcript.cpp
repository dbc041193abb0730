#include "fockqkd/transcript.h"

#include <array>
#include <charconv>
#include <cstdio>

namespace fockqkd {

namespace {

constexpr std::array<std::string_view, 5> kTagNames = {"singlet", "attack", "spdc", "spdc_split",
                                                       "spdc_split_failed"};

std::optional<DetectionKind> parse_kind(std::string_view text) {
  if (text.size() != 1) {
    return std::nullopt;
  }
  switch (text[0]) {
    case 'N':
      return DetectionKind::kNoClick;
    case '0':
      return DetectionKind::kBit0;
    case '1':
      return DetectionKind::kBit1;
    case 'D':
      return DetectionKind::kDoubleClick;
    default:
      return std::nullopt;
  }
}

std::string bit_text(int bit) { return bit < 0 ? "-" : std::to_string(bit); }

}  // namespace

std::string to_string(SourceTag tag) { return std::string(kTagNames[static_cast<int>(tag)]); }

std::optional<SourceTag> parse_source_tag(std::string_view text) {
  for (std::size_t i = 0; i < kTagNames.size(); ++i) {
    if (kTagNames[i] == text) {
      return static_cast<SourceTag>(i);
    }
  }
  return std::nullopt;
}

std::string to_hex(std::uint64_t value) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(value));
  return buffer;
}

std::string format_record(const RoundRecord& record, const std::vector<std::string>& basis_names) {
  std::string line = std::to_string(record.round_idx);
  line += ',';
  line += to_string(record.source_tag);
  line += ',';
  line += basis_names.at(record.alice_basis);
  line += ',';
  line += basis_names.at(record.bob_basis);
  line += ',';
  line += to_char(record.alice_outcome);
  line += ',';
  line += to_char(record.bob_outcome);
  line += ',';
  line += record.sifted ? '1' : '0';
  line += ',';
  line += bit_text(record.alice_bit);
  line += ',';
  line += bit_text(record.bob_bit);
  line += ',';
  if (record.eve.measured) {
    line += to_char(record.eve.alice_side);
    line += to_char(record.eve.bob_side);
  } else {
    line += '-';
  }
  return line;
}

RoundRecord parse_record(std::string_view line, std::size_t line_number,
                         const std::vector<std::string>& basis_names) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  if (fields.size() != 10) {
    throw TranscriptError(line_number,
                          "expected 10 fields, found " + std::to_string(fields.size()));
  }

  RoundRecord record;
  const auto& idx = fields[0];
  const auto parsed = std::from_chars(idx.data(), idx.data() + idx.size(), record.round_idx);
  if (parsed.ec != std::errc{} || parsed.ptr != idx.data() + idx.size()) {
    throw TranscriptError(line_number, "bad round index '" + std::string(idx) + "'");
  }
  const auto tag = parse_source_tag(fields[1]);
  if (!tag) {
    throw TranscriptError(line_number, "unknown source tag '" + std::string(fields[1]) + "'");
  }
  record.source_tag = *tag;

  auto basis_index = [&](std::string_view name) {
    for (std::size_t i = 0; i < basis_names.size(); ++i) {
      if (basis_names[i] == name) {
        return static_cast<std::uint8_t>(i);
      }
    }
    throw TranscriptError(line_number, "basis '" + std::string(name) + "' not in basis set");
  };
  record.alice_basis = basis_index(fields[2]);
  record.bob_basis = basis_index(fields[3]);

  auto kind = [&](std::string_view text) {
    const auto parsed_kind = parse_kind(text);
    if (!parsed_kind) {
      throw TranscriptError(line_number, "bad detection outcome '" + std::string(text) + "'");
    }
    return *parsed_kind;
  };
  record.alice_outcome = kind(fields[4]);
  record.bob_outcome = kind(fields[5]);

  if (fields[6] != "0" && fields[6] != "1") {
    throw TranscriptError(line_number, "bad sifted flag '" + std::string(fields[6]) + "'");
  }
  record.sifted = fields[6] == "1";

  auto bit = [&](std::string_view text) {
    if (text == "-") {
      return -1;
    }
    if (text == "0" || text == "1") {
      return text[0] - '0';
    }
    throw TranscriptError(line_number, "bad bit '" + std::string(text) + "'");
  };
  record.alice_bit = bit(fields[7]);
  record.bob_bit = bit(fields[8]);

  if ((record.alice_outcome != DetectionKind::kNoClick) != (record.alice_bit >= 0) ||
      (record.bob_outcome != DetectionKind::kNoClick) != (record.bob_bit >= 0)) {
    throw TranscriptError(line_number, "bit fields disagree with detection outcomes");
  }
  if (record.sifted && (record.alice_bit < 0 || record.bob_bit < 0)) {
    throw TranscriptError(line_number, "sifted round without both bits");
  }

  const auto& eve = fields[9];
  if (eve != "-") {
    if (eve.size() != 2) {
      throw TranscriptError(line_number, "bad eve observation '" + std::string(eve) + "'");
    }
    record.eve.measured = true;
    record.eve.alice_side = kind(eve.substr(0, 1));
    record.eve.bob_side = kind(eve.substr(1, 1));
  }
  return record;
}

}  // namespace fockqkd
