#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "parley/corpus.hpp"
#include "parley/local_content.hpp"
#include "parley/providers.hpp"

namespace parley::global_content {

// DFS preorder of the agenda from its start item; nodes unreachable from
// the start are appended in declaration order.
struct LinearizedAgenda {
    std::vector<std::size_t> order;     // item indices
    std::vector<std::size_t> position;  // item index -> rank in order
};

struct Trajectory {
    std::vector<std::size_t> raw;     // per-block dominant item (Z)
    std::vector<std::size_t> deduped; // adjacent repeats collapsed (Z-hat)
    std::size_t window = 0;
    std::size_t step = 0;
};

// Pluggable artifact source for task_success; nullopt when nothing can be
// extracted. The bundled default returns the last fenced ``` block.
using ArtifactExtractor = std::function<std::optional<std::string>(const corpus::Conversation&)>;
ArtifactExtractor default_artifact_extractor();

// Raised when the objective is artifact-mode and extraction yields
// nothing; distinct from a false predicate.
class ArtifactExtractionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

bool evaluate_predicate(const corpus::Predicate& pred, const std::string& artifact);

// Saturation of an agenda item over the whole conversation.
int sat(const corpus::AgendaItem& item, const corpus::Conversation& conv,
        const local_content::ContentThresholds& th, const providers::ProviderBundle& bundle);

// Binary task success: artifact mode validates the extracted artifact
// against all predicates; state mode checks terminal-item saturation.
int task_success(const corpus::Conversation& conv, const corpus::ObjectiveSpec& objective,
                 const local_content::ContentThresholds& th,
                 const providers::ProviderBundle& bundle,
                 const ArtifactExtractor& extractor = default_artifact_extractor());

double acr(const corpus::Conversation& conv, const corpus::AgendaGraph& agenda,
           const local_content::ContentThresholds& th, const providers::ProviderBundle& bundle);

// Mean relevant-turn count per saturated item; nullopt when nothing is
// saturated (the epsilon-only denominator would be meaningless).
std::optional<double> pe(const corpus::Conversation& conv, const corpus::AgendaGraph& agenda,
                         const local_content::ContentThresholds& th,
                         const providers::ProviderBundle& bundle);

LinearizedAgenda linearize(const corpus::AgendaGraph& agenda);

// Overlapping blocks of size w with step delta (final partial block
// included); each block maps to its most relevant item, ties by
// declaration order.
Trajectory extract_trajectory(const corpus::Conversation& conv,
                              const corpus::AgendaGraph& agenda, std::size_t w,
                              std::size_t delta, const providers::ProviderBundle& bundle);

// Fraction of non-regressive transitions; a transition regresses when the
// linearized positions differ by more than r in either direction. nullopt
// when the deduped trajectory has fewer than two entries.
std::optional<double> cs(const corpus::Conversation& conv, const corpus::AgendaGraph& agenda,
                         std::size_t w, std::size_t delta, std::size_t r,
                         const providers::ProviderBundle& bundle);
std::optional<double> cs_from_trajectory(const Trajectory& traj, const LinearizedAgenda& lin,
                                         std::size_t r);

// Net semantic displacement per generated turn; the generated region is
// turns past history_length.
double pd(const corpus::Conversation& conv, const providers::ProviderBundle& bundle);
double pd_from_embeddings(const std::vector<embedding::Vec>& generated);

// Harmonic mean of consecutive step sizes; nullopt below two generated
// turns.
std::optional<double> hmp(const corpus::Conversation& conv,
                          const providers::ProviderBundle& bundle);
std::optional<double> hmp_from_embeddings(const std::vector<embedding::Vec>& generated);

}  // namespace parley::global_content
