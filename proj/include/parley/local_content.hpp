#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "parley/corpus.hpp"
#include "parley/providers.hpp"

namespace parley::local_content {

// Free parameters of the content metrics, recorded in every report
// fingerprint. tau_rel and rho follow the suggested values; the rest are
// engine defaults.
struct ContentThresholds {
    double tau_rel = 0.6;    // turn-to-item relevance
    double tau_cov = 0.3;    // saturation threshold on InfoCov
    double tau_lnr = 0.7;    // truly-novel unit similarity cutoff
    double tau_topic = 0.2;  // topic-mixture stability cutoff
    double gamma = 3.0;      // InfoCov count scale
    double rho = 0.8;        // dominant topic mass
    std::size_t delta = 5;   // context expansion increment
    std::size_t ell = 3;     // augmentation window for TES
};

// Per-item coverage over a turn span.
struct AgendaCoverageState {
    // parallel to agenda.items
    std::vector<std::vector<std::size_t>> relevant_turns;  // indices into the span
    std::vector<double> info_cov;
    std::vector<bool> saturated;
    std::size_t current_item = 0;  // argmax |relevant|, ties by declaration order
};

struct LexicalUnitSet {
    std::set<std::string> units;
};

// Coverage score: count saturation times mean pairwise dissimilarity of
// the relevant turns; 0 when fewer than two relevant turns.
double info_cov(const corpus::AgendaItem& item, const std::vector<corpus::Turn>& span,
                const ContentThresholds& th, const providers::ProviderBundle& bundle);

AgendaCoverageState coverage_state(const corpus::AgendaGraph& agenda,
                                   const std::vector<corpus::Turn>& span,
                                   const ContentThresholds& th,
                                   const providers::ProviderBundle& bundle);

std::size_t current_item(const AgendaCoverageState& cov);

// DFS next-item selection: first undiscovered item at or below the
// saturation threshold, successors before predecessors, declaration-order
// children. nullopt when everything reachable is saturated.
std::optional<std::size_t> next_unsaturated(const corpus::AgendaGraph& agenda, std::size_t from,
                                            const AgendaCoverageState& cov,
                                            const ContentThresholds& th);

struct ApResult {
    double value = 0.0;
    bool agenda_exhausted = false;  // no unsaturated item existed
    std::size_t target_item = 0;
};

ApResult ap(const std::string& candidate_text, const corpus::ContextWindow& window,
            const corpus::AgendaGraph& agenda, const ContentThresholds& th,
            const providers::ProviderBundle& bundle);

LexicalUnitSet lexical_units(const std::string& text);

// Share of units in the candidate unseen in the window. nullopt when the
// candidate has no units.
std::optional<double> lnr(const std::string& candidate_text,
                          const corpus::ContextWindow& window);
std::optional<double> lnr_e(const std::string& candidate_text,
                            const corpus::ContextWindow& window, const ContentThresholds& th,
                            const providers::ProviderBundle& bundle);
std::optional<double> lnr_e_w(const std::string& candidate_text,
                              const corpus::ContextWindow& window, const ContentThresholds& th,
                              const providers::ProviderBundle& bundle);

enum class SnsMode { min, avg };

double m_sns(const std::string& candidate_text, const corpus::ContextWindow& window,
             SnsMode mode, const providers::ProviderBundle& bundle);

// Transition-model probability of the candidate's act given the window's
// act sequence.
double daf(const std::string& candidate_text, const corpus::ContextWindow& window,
           const providers::ProviderBundle& bundle);

// Exponentiated mean token log-likelihood.
double ll(const std::string& candidate_text, const corpus::ContextWindow& window,
          const providers::ProviderBundle& bundle);

// Probability mass the candidate (with a short support window) assigns to
// topics outside the established dominant set. nullopt when topic
// distributions are unavailable (no content tokens).
std::optional<double> tes(const std::string& candidate_text, const corpus::Conversation& conv,
                          std::size_t end_index, const ContentThresholds& th,
                          const providers::ProviderBundle& bundle);

// smallest topic set with mass >= rho, greedy by descending mass, ties by
// topic index
std::vector<std::size_t> dominant_topics(const std::vector<double>& dist, double rho);

}  // namespace parley::local_content
