#include "l2t/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "l2t/error.hpp"
#include "l2t/text_util.hpp"

namespace l2t {

namespace {

using Tokens = std::vector<std::string>;
using NgramCounts = std::map<std::vector<std::string_view>, std::size_t>;

NgramCounts ngrams(const Tokens& tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::vector<std::string_view> key(tokens.begin() + i, tokens.begin() + i + n);
    ++counts[key];
  }
  return counts;
}

std::size_t total(const NgramCounts& c) {
  std::size_t t = 0;
  for (const auto& [_, v] : c) t += v;
  return t;
}

std::size_t clipped_overlap(const NgramCounts& cand, const NgramCounts& ref) {
  std::size_t m = 0;
  for (const auto& [k, v] : cand) {
    if (auto it = ref.find(k); it != ref.end()) m += std::min(v, it->second);
  }
  return m;
}

void check_corpus(const std::vector<std::string>& c, const std::vector<std::string>& r) {
  if (c.empty() || r.empty()) throw Error(ErrorCode::EmptyCorpus, "empty corpus");
  if (c.size() != r.size()) {
    throw Error(ErrorCode::BadRequest, "candidate and reference counts differ (" +
                                           std::to_string(c.size()) + " vs " +
                                           std::to_string(r.size()) + ")");
  }
}

double f1(double overlap, double cand_total, double ref_total) {
  if (overlap <= 0 || cand_total <= 0 || ref_total <= 0) return 0.0;
  double p = overlap / cand_total;
  double r = overlap / ref_total;
  return 2 * p * r / (p + r);
}

}  // namespace

std::string_view rouge_variant_name(RougeVariant v) noexcept {
  switch (v) {
    case RougeVariant::R1: return "rouge1";
    case RougeVariant::R2: return "rouge2";
    case RougeVariant::R4: return "rouge4";
    case RougeVariant::L: return "rougeL";
  }
  return "?";
}

double bleu4(const std::vector<std::string>& candidates, const std::vector<std::string>& references) {
  check_corpus(candidates, references);
  std::size_t matches[4] = {0, 0, 0, 0};
  std::size_t possible[4] = {0, 0, 0, 0};
  std::size_t cand_len = 0;
  std::size_t ref_len = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    Tokens c = text::split_ws(candidates[i]);
    Tokens r = text::split_ws(references[i]);
    cand_len += c.size();
    ref_len += r.size();
    for (std::size_t n = 1; n <= 4; ++n) {
      NgramCounts cn = ngrams(c, n);
      matches[n - 1] += clipped_overlap(cn, ngrams(r, n));
      possible[n - 1] += total(cn);
    }
  }
  double log_sum = 0;
  for (int n = 0; n < 4; ++n) {
    if (matches[n] == 0 || possible[n] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(matches[n]) / static_cast<double>(possible[n]));
  }
  double bp = cand_len >= ref_len
                  ? 1.0
                  : std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(cand_len));
  return 100.0 * bp * std::exp(log_sum / 4.0);
}

double rouge_n_f1(const Tokens& candidate, const Tokens& reference, std::size_t n) {
  NgramCounts c = ngrams(candidate, n);
  NgramCounts r = ngrams(reference, n);
  std::size_t ct = total(c);
  std::size_t rt = total(r);
  if (ct == 0 && rt == 0) return candidate == reference ? 1.0 : 0.0;
  return f1(static_cast<double>(clipped_overlap(c, r)), static_cast<double>(ct),
            static_cast<double>(rt));
}

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l_f1(const Tokens& candidate, const Tokens& reference) {
  if (candidate.empty() && reference.empty()) return 1.0;
  return f1(static_cast<double>(lcs_length(candidate, reference)),
            static_cast<double>(candidate.size()), static_cast<double>(reference.size()));
}

double rouge(const std::vector<std::string>& candidates, const std::vector<std::string>& references,
             RougeVariant variant) {
  check_corpus(candidates, references);
  double sum = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    Tokens c = text::split_ws(candidates[i]);
    Tokens r = text::split_ws(references[i]);
    switch (variant) {
      case RougeVariant::R1: sum += rouge_n_f1(c, r, 1); break;
      case RougeVariant::R2: sum += rouge_n_f1(c, r, 2); break;
      case RougeVariant::R4: sum += rouge_n_f1(c, r, 4); break;
      case RougeVariant::L: sum += rouge_l_f1(c, r); break;
    }
  }
  return 100.0 * sum / static_cast<double>(candidates.size());
}

}  // namespace l2t
