#include "advisor/llm/gateway.h"

#include <vector>

#include "advisor/common/text.h"
#include "advisor/generated/defaults.h"

namespace advisor::llm {

namespace {

struct Fact {
  std::string id;
  std::string name;
  std::string credits;
};

std::size_t count_occurrences(std::string_view hay, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string_view::npos; pos = hay.find(needle, pos + needle.size())) ++n;
  return n;
}

// Entries of the COURSE_FACT line:
//   id = X name = N credits = C description = 'D' id = ...
std::vector<Fact> parse_facts(std::string_view body) {
  constexpr std::string_view kHeader = "### COURSE_FACT ";
  std::vector<Fact> out;
  std::size_t line_start = 0;
  std::string_view line;
  while (line_start <= body.size()) {
    auto end = body.find('\n', line_start);
    auto candidate = body.substr(line_start, end == std::string_view::npos ? std::string_view::npos : end - line_start);
    if (candidate.substr(0, kHeader.size()) == kHeader) {
      line = candidate.substr(kHeader.size());
      break;
    }
    if (end == std::string_view::npos) break;
    line_start = end + 1;
  }

  std::size_t pos = 0;
  while (line.substr(pos, 5) == "id = ") {
    const auto name_at = line.find(" name = ", pos);
    const auto credits_at = line.find(" credits = ", name_at == std::string_view::npos ? pos : name_at);
    const auto desc_at = line.find(" description = '", credits_at == std::string_view::npos ? pos : credits_at);
    if (name_at == std::string_view::npos || credits_at == std::string_view::npos || desc_at == std::string_view::npos) {
      break;
    }
    Fact f;
    f.id = std::string(line.substr(pos + 5, name_at - pos - 5));
    f.name = std::string(line.substr(name_at + 8, credits_at - name_at - 8));
    f.credits = std::string(line.substr(credits_at + 11, desc_at - credits_at - 11));
    out.push_back(std::move(f));
    const auto desc_start = desc_at + 16;
    const auto next = line.find("' id = ", desc_start);
    if (next == std::string_view::npos) break;
    pos = next + 2;
  }
  return out;
}

std::string course_phrase(const Fact& f) {
  return f.id + " (" + f.name + ", " + f.credits + (f.credits == "1" ? " credit)" : " credits)");
}

std::string enumerate(const std::vector<std::string>& items) {
  if (items.size() == 1) return items[0];
  if (items.size() == 2) return items[0] + " and " + items[1];
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    if (i + 1 == items.size()) out += "and ";
    out += items[i];
  }
  return out;
}

}  // namespace

const std::string& system_directive() {
  static const std::string directive(generated::kSystemDirective);
  return directive;
}

void check_request(const GenerationRequest& r) {
  if (r.decoding.beam_count < 1) throw ConfigError("beam_count must be >= 1");
  if (r.decoding.temperature < 0.0) throw ConfigError("temperature must be non-negative");
  if (r.decoding.max_new_tokens < 1) throw ConfigError("max_new_tokens must be positive");
  if (r.timeout.count() <= 0) throw ConfigError("timeout must be positive");
}

GenerationRequest make_request(std::string prompt_body, DecodingParams decoding, std::chrono::milliseconds timeout) {
  return GenerationRequest{system_directive(), std::move(prompt_body), decoding, timeout};
}

ParsedOutput parse_output(std::string_view raw) {
  const std::string trimmed = text::trim(raw);
  if (trimmed == kFallbackToken) return FallbackOutput{};
  if (trimmed.empty()) throw ContractViolation("empty generator output");

  for (std::string_view tag : {"<think>", "</think>", "<response>", "</response>"}) {
    const auto n = count_occurrences(trimmed, tag);
    if (n != 1) {
      throw ContractViolation(std::string(n == 0 ? "missing " : "duplicated ") + std::string(tag));
    }
  }
  const auto think_open = trimmed.find("<think>");
  const auto think_close = trimmed.find("</think>");
  const auto resp_open = trimmed.find("<response>");
  const auto resp_close = trimmed.find("</response>");
  if (!(think_open < think_close && think_close < resp_open && resp_open < resp_close)) {
    throw ContractViolation("blocks out of order");
  }
  TwoBlockOutput out;
  out.think = text::trim(std::string_view(trimmed).substr(think_open + 7, think_close - think_open - 7));
  out.response = text::trim(std::string_view(trimmed).substr(resp_open + 10, resp_close - resp_open - 10));
  if (out.think.empty() || out.response.empty()) throw ContractViolation("empty block");
  return out;
}

GenerationResult generate(const GenerationRequest& request, GeneratorBackend& backend) {
  check_request(request);
  const auto start = std::chrono::steady_clock::now();
  std::string raw;
  try {
    raw = backend.generate(request);
  } catch (const GenerationTimeout&) {
    throw;
  } catch (const TransportError&) {
    raw = backend.generate(request);
  }
  GenerationResult result;
  result.latency = std::chrono::steady_clock::now() - start;
  result.raw = raw;
  auto parsed = parse_output(raw);
  if (std::holds_alternative<FallbackOutput>(parsed)) {
    result.fallback = true;
    return result;
  }
  auto& blocks = std::get<TwoBlockOutput>(parsed);
  if (blocks.response.rfind(kOpeningPhrase, 0) != 0) {
    throw ContractViolation("response does not open with the mandated phrase");
  }
  result.think = std::move(blocks.think);
  result.response = std::move(blocks.response);
  return result;
}

std::string stub_generate(std::string_view prompt_body) {
  const auto facts = parse_facts(prompt_body);
  if (facts.empty()) return std::string(kFallbackToken);
  std::vector<std::string> ids;
  std::vector<std::string> phrases;
  for (const auto& f : facts) {
    ids.push_back(f.id);
    phrases.push_back(course_phrase(f));
  }
  return "<think>The evidence lists " + std::to_string(facts.size()) +
         (facts.size() == 1 ? " vetted course: " : " vetted courses: ") + text::join(ids, ", ") +
         ".</think>\n<response>" + std::string(kOpeningPhrase) + " " + enumerate(phrases) + ".</response>";
}

std::string StubBackend::generate(const GenerationRequest& request) { return stub_generate(request.prompt_body); }

std::string DegradedStubBackend::generate(const GenerationRequest& request) {
  static const char* const kPrefixes[] = {"CSC", "COP", "CAP", "DAT", "ITN", "MAN"};
  auto h = text::fnv1a64(request.prompt_body);
  std::vector<std::string> picks;
  for (int i = 0; i < 3; ++i) {
    const auto prefix = kPrefixes[h % 6];
    h /= 6;
    const auto number = 1000 + h % 9000;
    h /= 9000;
    picks.push_back(std::string(prefix) + std::to_string(number));
  }
  return "<think>No catalog evidence was supplied; answering from general knowledge.</think>\n<response>" +
         std::string(kOpeningPhrase) + " " + enumerate(picks) +
         ", which are popular choices for students in your situation.</response>";
}

nlohmann::json to_json(const DecodingParams& d) {
  return {{"beam_count", d.beam_count}, {"temperature", d.temperature}, {"max_new_tokens", d.max_new_tokens}};
}

nlohmann::json to_json(const GenerationResult& r) {
  return {{"think", r.think},
          {"response", r.response},
          {"fallback", r.fallback},
          {"raw", r.raw},
          {"latency_s", r.latency.count()}};
}

}  // namespace advisor::llm
