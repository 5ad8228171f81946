#include "parley/corpus.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "parley/errors.hpp"
#include "parley/text.hpp"

namespace parley::corpus {

using nlohmann::json;

bool AgendaGraph::contains(const std::string& id) const {
    for (const auto& it : items) {
        if (it.id == id) return true;
    }
    return false;
}

std::size_t AgendaGraph::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].id == id) return i;
    }
    throw std::out_of_range("agenda item not found: " + id);
}

std::vector<std::size_t> AgendaGraph::successors(std::size_t item) const {
    std::vector<std::size_t> out;
    const std::string& id = items[item].id;
    for (const auto& [from, to] : edges) {
        if (from == id) out.push_back(index_of(to));
    }
    return out;
}

std::vector<std::size_t> AgendaGraph::predecessors(std::size_t item) const {
    std::vector<std::size_t> out;
    const std::string& id = items[item].id;
    for (const auto& [from, to] : edges) {
        if (to == id) out.push_back(index_of(from));
    }
    return out;
}

const SpeakerProfile* Dataset::profile_for(const std::string& speaker_id) const {
    auto it = profiles.find(speaker_id);
    return it == profiles.end() ? nullptr : &it->second;
}

namespace {

AgendaGraph parse_agenda(const json& j, std::size_t line_no) {
    AgendaGraph g;
    if (!j.is_object()) throw ParseError("agenda must be an object", line_no, "agenda");
    if (!j.contains("items") || !j["items"].is_array()) {
        throw ParseError("agenda requires an items array", line_no, "agenda.items");
    }
    std::set<std::string> seen;
    for (const auto& it : j["items"]) {
        AgendaItem item;
        if (!it.is_object() || !it.contains("id") || !it.contains("text")) {
            throw ParseError("agenda item requires id and text", line_no, "agenda.items");
        }
        item.id = it["id"].get<std::string>();
        item.text = it["text"].get<std::string>();
        if (!seen.insert(item.id).second) {
            throw ParseError("duplicate agenda item id: " + item.id, line_no, "agenda.items");
        }
        g.items.push_back(std::move(item));
    }
    if (j.contains("edges")) {
        for (const auto& e : j["edges"]) {
            if (!e.is_array() || e.size() != 2) {
                throw ParseError("agenda edge must be a [from, to] pair", line_no, "agenda.edges");
            }
            std::string from = e[0].get<std::string>();
            std::string to = e[1].get<std::string>();
            if (!g.contains(from) || !g.contains(to)) {
                throw ParseError("agenda edge endpoint not in items: " + from + "->" + to,
                                 line_no, "agenda.edges");
            }
            g.edges.emplace_back(std::move(from), std::move(to));
        }
    }
    if (!j.contains("start")) throw ParseError("agenda requires start", line_no, "agenda.start");
    g.start_item = j["start"].get<std::string>();
    if (!g.contains(g.start_item)) {
        throw ParseError("agenda start item not in items: " + g.start_item, line_no,
                         "agenda.start");
    }
    return g;
}

ObjectiveSpec parse_objective(const json& j, std::size_t line_no) {
    ObjectiveSpec o;
    if (!j.is_object() || !j.contains("mode")) {
        throw ParseError("objective requires mode", line_no, "objective.mode");
    }
    const std::string mode = j["mode"].get<std::string>();
    if (mode == "artifact") {
        o.mode = ObjectiveMode::artifact;
        if (!j.contains("criteria") || !j["criteria"].is_array()) {
            throw ParseError("artifact objective requires criteria", line_no,
                             "objective.criteria");
        }
        if (j.contains("terminal_item")) {
            throw ParseError("artifact objective must not carry terminal_item", line_no,
                             "objective.terminal_item");
        }
        for (const auto& c : j["criteria"]) {
            Predicate p;
            p.kind = c.at("kind").get<std::string>();
            p.arg = c.at("arg").get<std::string>();
            if (p.kind != "regex" && p.kind != "json_schema" && p.kind != "contains") {
                throw ParseError("unknown predicate kind: " + p.kind, line_no,
                                 "objective.criteria");
            }
            o.criteria.push_back(std::move(p));
        }
    } else if (mode == "state") {
        o.mode = ObjectiveMode::state;
        if (!j.contains("terminal_item")) {
            throw ParseError("state objective requires terminal_item", line_no,
                             "objective.terminal_item");
        }
        if (j.contains("criteria")) {
            throw ParseError("state objective must not carry criteria", line_no,
                             "objective.criteria");
        }
        o.terminal_item_id = j["terminal_item"].get<std::string>();
    } else {
        throw ParseError("objective mode must be artifact or state, got " + mode, line_no,
                         "objective.mode");
    }
    return o;
}

}  // namespace

Conversation parse_conversation_line(const std::string& line, std::size_t line_no) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON record: ") + e.what(), line_no);
    }
    if (!j.is_object()) throw ParseError("record must be a JSON object", line_no);

    Conversation conv;
    if (!j.contains("id") || !j["id"].is_string()) {
        throw ParseError("record requires a string id", line_no, "id");
    }
    conv.id = j["id"].get<std::string>();
    if (conv.id.empty()) throw ParseError("conversation id is empty", line_no, "id");

    if (!j.contains("turns") || !j["turns"].is_array() || j["turns"].empty()) {
        throw ParseError("record requires a non-empty turns array", line_no, "turns");
    }
    std::size_t idx = 0;
    for (const auto& t : j["turns"]) {
        Turn turn;
        turn.index = idx;
        if (!t.is_object() || !t.contains("speaker") || !t.contains("text")) {
            throw ParseError("turn " + std::to_string(idx) + " requires speaker and text",
                             line_no, "turns");
        }
        turn.speaker_id = t["speaker"].get<std::string>();
        if (turn.speaker_id.empty()) {
            throw ParseError("turn " + std::to_string(idx) + " has empty speaker", line_no,
                             "turns.speaker");
        }
        turn.text = t["text"].get<std::string>();
        if (text::trim(turn.text).empty()) {
            throw ParseError("turn " + std::to_string(idx) + " has empty utterance text",
                             line_no, "turns.text");
        }
        if (t.contains("ts")) turn.timestamp = t["ts"].get<std::string>();
        conv.participants.insert(turn.speaker_id);
        conv.turns.push_back(std::move(turn));
        ++idx;
    }

    if (j.contains("agenda")) conv.agenda = parse_agenda(j["agenda"], line_no);
    if (j.contains("objective")) conv.objective = parse_objective(j["objective"], line_no);
    if (j.contains("history_length")) {
        const auto h = j["history_length"].get<std::int64_t>();
        if (h < 0 || std::size_t(h) > conv.turns.size()) {
            throw ParseError("history_length out of range: " + std::to_string(h), line_no,
                             "history_length");
        }
        conv.history_length = std::size_t(h);
    }
    if (j.contains("is_generated")) conv.is_generated = j["is_generated"].get<bool>();
    return conv;
}

Dataset parse_dataset_stream(std::istream& in, const std::string& origin) {
    Dataset ds;
    ds.source_label = origin;
    std::set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        Conversation conv = parse_conversation_line(line, line_no);
        if (!ids.insert(conv.id).second) {
            throw ParseError("duplicate conversation id: " + conv.id, line_no, "id");
        }
        ds.conversations.push_back(std::move(conv));
    }
    return ds;
}

Dataset parse_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dataset file: " + path);
    return parse_dataset_stream(in, path);
}

void parse_profiles_stream(std::istream& in, const std::string& origin, Dataset& ds) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(std::string("invalid profile record in ") + origin + ": " + e.what(),
                             line_no);
        }
        SpeakerProfile p;
        p.speaker_id = j.at("speaker").get<std::string>();
        if (j.contains("background")) p.background_text = j["background"].get<std::string>();
        if (ds.profiles.count(p.speaker_id)) {
            throw ParseError("duplicate speaker profile: " + p.speaker_id, line_no, "speaker");
        }
        ds.profiles.emplace(p.speaker_id, std::move(p));
    }
}

void parse_profiles(const std::string& path, Dataset& ds) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open profiles file: " + path);
    parse_profiles_stream(in, path, ds);
}

std::string serialize_conversation(const Conversation& conv) {
    json j;
    j["id"] = conv.id;
    json turns = json::array();
    for (const auto& t : conv.turns) {
        json jt;
        jt["speaker"] = t.speaker_id;
        jt["text"] = t.text;
        if (t.timestamp) jt["ts"] = *t.timestamp;
        turns.push_back(std::move(jt));
    }
    j["turns"] = std::move(turns);
    if (conv.agenda) {
        json a;
        a["items"] = json::array();
        for (const auto& it : conv.agenda->items) {
            a["items"].push_back({{"id", it.id}, {"text", it.text}});
        }
        a["edges"] = json::array();
        for (const auto& [from, to] : conv.agenda->edges) {
            a["edges"].push_back(json::array({from, to}));
        }
        a["start"] = conv.agenda->start_item;
        j["agenda"] = std::move(a);
    }
    if (conv.objective) {
        json o;
        if (conv.objective->mode == ObjectiveMode::artifact) {
            o["mode"] = "artifact";
            o["criteria"] = json::array();
            for (const auto& c : conv.objective->criteria) {
                o["criteria"].push_back({{"kind", c.kind}, {"arg", c.arg}});
            }
        } else {
            o["mode"] = "state";
            o["terminal_item"] = conv.objective->terminal_item_id;
        }
        j["objective"] = std::move(o);
    }
    if (conv.history_length > 0) j["history_length"] = conv.history_length;
    if (conv.is_generated) j["is_generated"] = true;
    return j.dump();
}

ContextWindow context_window(const Conversation& conv, std::size_t end_index, std::size_t k) {
    if (end_index == 0 || end_index > conv.turns.size()) {
        throw std::out_of_range("context_window end_index out of range: " +
                                std::to_string(end_index) + " for " +
                                std::to_string(conv.turns.size()) + " turns");
    }
    if (k == 0) throw std::invalid_argument("context_window k must be positive");
    ContextWindow w;
    w.conversation_id = conv.id;
    w.end_index = end_index;
    w.k = k;
    const std::size_t begin = end_index > k ? end_index - k : 0;
    w.turns.assign(conv.turns.begin() + std::ptrdiff_t(begin),
                   conv.turns.begin() + std::ptrdiff_t(end_index));
    return w;
}

std::vector<Turn> turns_by_speaker(const std::vector<Turn>& turns, const std::string& speaker_id) {
    std::vector<Turn> out;
    for (const auto& t : turns) {
        if (t.speaker_id == speaker_id) out.push_back(t);
    }
    return out;
}

std::vector<Turn> turns_not_by_speaker(const std::vector<Turn>& turns,
                                       const std::string& speaker_id) {
    std::vector<Turn> out;
    for (const auto& t : turns) {
        if (t.speaker_id != speaker_id) out.push_back(t);
    }
    return out;
}

}  // namespace parley::corpus
