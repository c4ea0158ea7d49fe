#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <string_view>

#include "copl/source.hpp"

namespace copl {

enum class TokenKind {
    Keyword,
    Identifier,
    IntLiteral,
    FloatLiteral,
    StringLiteral,
    Punct,
    EndOfInput,
};

// `lexeme` is the raw source slice (string literals keep their quotes), so
// every token except end-of-input carries non-empty text. `strValue` holds
// the decoded contents of a string literal.
struct Token {
    TokenKind kind = TokenKind::EndOfInput;
    std::string lexeme;
    std::string strValue;
    Pos pos;

    bool is_kw(std::string_view kw) const {
        return kind == TokenKind::Keyword && lexeme == kw;
    }
    bool is_punct(std::string_view p) const {
        return kind == TokenKind::Punct && lexeme == p;
    }
};

inline bool is_keyword(std::string_view s) {
    static constexpr std::array<std::string_view, 22> kws = {
        "bool",  "char",   "concept", "double", "else",  "false",
        "get",   "if",     "in",      "int",    "new",   "out",
        "return", "set",   "string",  "sub",    "super", "this",
        "true",  "value",  "void",    "while",
    };
    return std::binary_search(kws.begin(), kws.end(), s);
}

inline const char* token_kind_name(TokenKind k) {
    switch (k) {
        case TokenKind::Keyword: return "keyword";
        case TokenKind::Identifier: return "identifier";
        case TokenKind::IntLiteral: return "int literal";
        case TokenKind::FloatLiteral: return "float literal";
        case TokenKind::StringLiteral: return "string literal";
        case TokenKind::Punct: return "punctuation";
        case TokenKind::EndOfInput: return "end of input";
    }
    return "token";
}

}  // namespace copl
