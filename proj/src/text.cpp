#include "parley/text.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_set>

namespace parley::text {

namespace {

// Minimal UTF-8 decoding; malformed bytes are treated as separators.
struct Decoded {
    char32_t cp;
    std::size_t len;
};

Decoded decode(std::string_view s, std::size_t i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) return {b0, 1};
    auto cont = [&](std::size_t off) -> int {
        if (i + off >= s.size()) return -1;
        const auto b = static_cast<unsigned char>(s[i + off]);
        return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
    };
    if ((b0 & 0xE0) == 0xC0) {
        const int c1 = cont(1);
        if (c1 < 0) return {0xFFFD, 1};
        return {static_cast<char32_t>(((b0 & 0x1F) << 6) | c1), 2};
    }
    if ((b0 & 0xF0) == 0xE0) {
        const int c1 = cont(1), c2 = cont(2);
        if (c1 < 0 || c2 < 0) return {0xFFFD, 1};
        return {static_cast<char32_t>(((b0 & 0x0F) << 12) | (c1 << 6) | c2), 3};
    }
    if ((b0 & 0xF8) == 0xF0) {
        const int c1 = cont(1), c2 = cont(2), c3 = cont(3);
        if (c1 < 0 || c2 < 0 || c3 < 0) return {0xFFFD, 1};
        return {static_cast<char32_t>(((b0 & 0x07) << 18) | (c1 << 12) | (c2 << 6) | c3), 4};
    }
    return {0xFFFD, 1};
}

void encode(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool is_cjk(char32_t cp) {
    return (cp >= 0x2E80 && cp <= 0x2FDF) ||  // radicals
           (cp >= 0x3400 && cp <= 0x4DBF) ||  // ext A
           (cp >= 0x4E00 && cp <= 0x9FFF) ||  // unified
           (cp >= 0xF900 && cp <= 0xFAFF) ||  // compat
           (cp >= 0x20000 && cp <= 0x2A6DF);
}

bool is_word_char(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
               (cp >= '0' && cp <= '9') || cp == '_' || cp == '\'';
    }
    if (cp == 0xD7 || cp == 0xF7) return false;  // multiplication/division signs
    // Latin-1 letters through general alphabetic blocks; excludes
    // punctuation blocks (0x2000-0x206F) and CJK (tokenized per char).
    if (cp >= 0xC0 && cp < 0x2000) return true;
    if (cp >= 0x3040 && cp <= 0x30FF) return true;  // kana runs
    if (cp >= 0xAC00 && cp <= 0xD7AF) return true;  // hangul
    return false;
}

bool is_space_cp(char32_t cp) {
    return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' ||
           cp == '\v' || cp == 0xA0 || cp == 0x3000 || (cp >= 0x2000 && cp <= 0x200B);
}

const std::unordered_set<std::string>& stopword_set() {
    static const std::unordered_set<std::string> kStop = {
        // English function words
        "a", "an", "the", "and", "or", "but", "if", "then", "else", "so",
        "of", "to", "in", "on", "at", "by", "for", "with", "about", "as",
        "into", "from", "up", "down", "out", "over", "under", "again",
        "is", "am", "are", "was", "were", "be", "been", "being",
        "do", "does", "did", "doing", "have", "has", "had", "having",
        "will", "would", "shall", "should", "can", "could", "may", "might",
        "must", "i", "me", "my", "mine", "we", "us", "our", "ours",
        "you", "your", "yours", "he", "him", "his", "she", "her", "hers",
        "it", "its", "they", "them", "their", "theirs", "this", "that",
        "these", "those", "what", "which", "who", "whom", "whose", "when",
        "where", "why", "how", "there", "here", "no", "not", "nor",
        "too", "very", "just", "also", "than", "such", "own", "same",
        "each", "few", "more", "most", "other", "some", "any", "all",
        "both", "only", "because", "while", "during", "before", "after",
        "s", "t", "don", "didn", "isn", "aren", "won", "let",
        // common Chinese function characters (single-char tokens)
        "的", "了", "是", "在", "和", "就", "都", "而", "及", "或",
        "也", "很", "到", "要", "有", "个", "这", "那", "吗", "呢",
        "吧", "啊", "我", "你", "他", "她", "它", "们",
    };
    return kStop;
}

bool capitalized_ascii(std::string_view token) {
    if (token.empty()) return false;
    const auto c = static_cast<unsigned char>(token.front());
    if (c >= 'A' && c <= 'Z') return true;
    return false;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view utf8) {
    std::vector<std::string> out;
    std::string cur;
    std::size_t i = 0;
    auto flush = [&] {
        if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    };
    while (i < utf8.size()) {
        const Decoded d = decode(utf8, i);
        if (is_cjk(d.cp)) {
            flush();
            std::string one;
            encode(d.cp, one);
            out.push_back(std::move(one));
        } else if (is_word_char(d.cp)) {
            encode(d.cp, cur);
        } else {
            flush();
        }
        i += d.len;
    }
    flush();
    // apostrophes are word chars so contractions survive; strip the ones
    // that ended up on token edges
    for (auto& t : out) {
        while (!t.empty() && t.front() == '\'') t.erase(t.begin());
        while (!t.empty() && t.back() == '\'') t.pop_back();
    }
    std::erase_if(out, [](const std::string& t) { return t.empty(); });
    return out;
}

std::string casefold(std::string_view token) {
    std::string out;
    out.reserve(token.size());
    std::size_t i = 0;
    while (i < token.size()) {
        const Decoded d = decode(token, i);
        char32_t cp = d.cp;
        if (cp >= 'A' && cp <= 'Z') {
            cp += 0x20;
        } else if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) {
            cp += 0x20;  // Latin-1 uppercase block
        }
        encode(cp, out);
        i += d.len;
    }
    return out;
}

std::vector<std::string> tokenize_folded(std::string_view utf8) {
    std::vector<std::string> toks = tokenize(utf8);
    for (auto& t : toks) t = casefold(t);
    return toks;
}

bool is_stopword(std::string_view folded_token) {
    return stopword_set().count(std::string(folded_token)) > 0;
}

std::string lemmatize(std::string_view folded_token) {
    const bool ascii = std::all_of(folded_token.begin(), folded_token.end(), [](char c) {
        return static_cast<unsigned char>(c) < 0x80;
    });
    std::string t(folded_token);
    if (!ascii) return t;
    auto ends = [&](std::string_view suf) {
        return t.size() >= suf.size() && t.compare(t.size() - suf.size(), suf.size(), suf) == 0;
    };
    // ordered rules; a minimum stem of three characters guards short words
    const bool sibilant_es = ends("xes") || ends("ses") || ends("zes") || ends("ches") ||
                             ends("shes");
    if (ends("ies") && t.size() >= 5) {
        t.replace(t.size() - 3, 3, "y");
    } else if (ends("sses")) {
        t.erase(t.size() - 2);
    } else if (sibilant_es && t.size() >= 5) {
        t.erase(t.size() - 2);
    } else if (ends("ing") && t.size() >= 6) {
        t.erase(t.size() - 3);
    } else if (ends("edly") && t.size() >= 7) {
        t.erase(t.size() - 4);
    } else if (ends("ed") && t.size() >= 5) {
        t.erase(t.size() - 2);
    } else if (ends("ly") && t.size() >= 5) {
        t.erase(t.size() - 2);
    } else if (ends("s") && !ends("ss") && t.size() >= 4) {
        t.erase(t.size() - 1);
    }
    return t;
}

std::vector<std::string> content_tokens(std::string_view utf8) {
    std::vector<std::string> out;
    for (auto& t : tokenize_folded(utf8)) {
        if (!is_stopword(t)) out.push_back(std::move(t));
    }
    return out;
}

std::set<std::string> lexical_units(std::string_view utf8) {
    std::set<std::string> units;
    const std::vector<std::string> raw = tokenize(utf8);

    // content-word lemmas + adjacent-content-word bigrams
    std::vector<std::string> lemmas;
    for (const auto& r : raw) {
        std::string folded = casefold(r);
        if (is_stopword(folded)) continue;
        lemmas.push_back(lemmatize(folded));
    }
    for (std::size_t i = 0; i < lemmas.size(); ++i) {
        units.insert(lemmas[i]);
        if (i + 1 < lemmas.size()) units.insert(lemmas[i] + "_" + lemmas[i + 1]);
    }

    // entity surface forms: runs of capitalized non-stopword tokens
    std::vector<std::string> run;
    auto flush_run = [&] {
        if (run.empty()) return;
        std::string joined;
        for (std::size_t i = 0; i < run.size(); ++i) {
            if (i) joined += "_";
            joined += run[i];
        }
        units.insert(std::move(joined));
        run.clear();
    };
    for (const auto& r : raw) {
        std::string folded = casefold(r);
        if (capitalized_ascii(r) && !is_stopword(folded)) {
            run.push_back(std::move(folded));
        } else {
            flush_run();
        }
    }
    flush_run();
    return units;
}

std::string_view trim(std::string_view s) {
    std::size_t b = 0;
    while (b < s.size()) {
        const Decoded d = decode(s, b);
        if (!is_space_cp(d.cp)) break;
        b += d.len;
    }
    std::size_t e = s.size();
    while (e > b) {
        // walk back to the previous codepoint start
        std::size_t p = e - 1;
        while (p > b && (static_cast<unsigned char>(s[p]) & 0xC0) == 0x80) --p;
        const Decoded d = decode(s, p);
        if (!is_space_cp(d.cp)) break;
        e = p;
    }
    return s.substr(b, e - b);
}

}  // namespace parley::text
