#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace l2t {

enum class RougeVariant { R1, R2, R4, L };

std::string_view rouge_variant_name(RougeVariant v) noexcept;

// Candidates and references are aligned one-to-one and already tokenized
// (whitespace separated). Errors: EmptyCorpus, BadRequest on length mismatch.

// Corpus BLEU-4 in [0, 100]: clipped n-gram precisions for n = 1..4 summed
// over the corpus, uniform geometric mean, brevity penalty. No smoothing.
double bleu4(const std::vector<std::string>& candidates, const std::vector<std::string>& references);

// Mean of per-sentence F1 in [0, 100].
double rouge(const std::vector<std::string>& candidates, const std::vector<std::string>& references,
             RougeVariant variant);

// Per-sentence F1 in [0, 1]. Two sentences without any n-gram of the
// requested order score 1 when their token sequences are equal, else 0.
double rouge_n_f1(const std::vector<std::string>& candidate,
                  const std::vector<std::string>& reference, std::size_t n);
double rouge_l_f1(const std::vector<std::string>& candidate,
                  const std::vector<std::string>& reference);

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);

}  // namespace l2t
