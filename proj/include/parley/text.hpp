#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace parley::text {

// Word-boundary segmentation over UTF-8. Alphanumeric runs (Latin, Greek,
// Cyrillic, ...) form one token; CJK ideographs are one token per
// character; everything else separates. Case is preserved.
std::vector<std::string> tokenize(std::string_view utf8);

// tokenize + casefold of every token.
std::vector<std::string> tokenize_folded(std::string_view utf8);

// ASCII + Latin-1 lowercasing; other scripts pass through.
std::string casefold(std::string_view token);

bool is_stopword(std::string_view folded_token);

// Coarse suffix-strip lemmatizer for Latin-script tokens; identity for
// anything containing non-ASCII bytes.
std::string lemmatize(std::string_view folded_token);

// Casefolded, stopword-filtered tokens (no lemmatization). Used for topic
// modeling documents.
std::vector<std::string> content_tokens(std::string_view utf8);

// Lexical units of an utterance: lemmatized content words, capitalized-run
// entity surface forms, and bigrams of adjacent content-word lemmas.
std::set<std::string> lexical_units(std::string_view utf8);

// Leading/trailing Unicode-space trim.
std::string_view trim(std::string_view s);

}  // namespace parley::text
