#pragma once

#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace parley::corpus {

// One speaker-utterance pair. index equals the turn's position in its
// conversation; text is non-empty after whitespace trimming.
struct Turn {
    std::size_t index = 0;
    std::string speaker_id;
    std::string text;
    std::optional<std::string> timestamp;
};

struct AgendaItem {
    std::string id;
    std::string text;
};

// Directed graph of agenda items with a designated start item. Items and
// edges keep declaration order; all tie-breaking downstream relies on it.
struct AgendaGraph {
    std::vector<AgendaItem> items;
    std::vector<std::pair<std::string, std::string>> edges;
    std::string start_item;

    bool contains(const std::string& id) const;
    std::size_t index_of(const std::string& id) const;  // throws std::out_of_range
    std::vector<std::size_t> successors(std::size_t item) const;
    std::vector<std::size_t> predecessors(std::size_t item) const;
};

enum class ObjectiveMode { artifact, state };

// Predicate over an extracted artifact. kind: regex | json_schema | contains.
struct Predicate {
    std::string kind;
    std::string arg;
};

struct ObjectiveSpec {
    ObjectiveMode mode = ObjectiveMode::artifact;
    std::vector<Predicate> criteria;  // artifact mode
    std::string terminal_item_id;     // state mode
};

struct Conversation {
    std::string id;
    std::vector<Turn> turns;
    std::set<std::string> participants;
    std::optional<AgendaGraph> agenda;
    std::optional<ObjectiveSpec> objective;
    bool is_generated = false;
    std::size_t history_length = 0;  // given-history turns; 0 = from scratch

    std::size_t generated_count() const {
        return turns.size() > history_length ? turns.size() - history_length : 0;
    }
};

struct SpeakerProfile {
    std::string speaker_id;
    std::optional<std::string> background_text;
};

// The k most recent turns before end_index (exclusive).
struct ContextWindow {
    std::string conversation_id;
    std::size_t end_index = 0;
    std::size_t k = 0;
    std::vector<Turn> turns;
};

struct Dataset {
    std::vector<Conversation> conversations;
    std::map<std::string, SpeakerProfile> profiles;
    std::string source_label;

    const SpeakerProfile* profile_for(const std::string& speaker_id) const;
};

// Line-delimited ingestion; rejects records violating type invariants with
// line numbers and field names. Duplicate conversation ids are an error.
Dataset parse_dataset(const std::string& path);
Dataset parse_dataset_stream(std::istream& in, const std::string& origin);
Conversation parse_conversation_line(const std::string& line, std::size_t line_no);

// Profiles file: {"speaker": str, "background": str} per line.
void parse_profiles(const std::string& path, Dataset& ds);
void parse_profiles_stream(std::istream& in, const std::string& origin, Dataset& ds);

// Canonical one-line JSON record; parse -> serialize is field-stable.
std::string serialize_conversation(const Conversation& conv);

// pre: 0 < end_index <= |turns|. Window holds [max(0, end_index - k), end_index).
ContextWindow context_window(const Conversation& conv, std::size_t end_index, std::size_t k);

std::vector<Turn> turns_by_speaker(const std::vector<Turn>& turns, const std::string& speaker_id);
std::vector<Turn> turns_not_by_speaker(const std::vector<Turn>& turns,
                                       const std::string& speaker_id);

}  // namespace parley::corpus
