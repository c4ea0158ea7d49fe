#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "copl/source.hpp"
#include "copl/token.hpp"

namespace copl {

namespace detail {

class Lexer {
public:
    explicit Lexer(std::string_view source) : src_(source) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_trivia();
            if (at_end()) {
                out.push_back(Token{TokenKind::EndOfInput, "", "", pos_});
                return out;
            }
            out.push_back(next_token());
        }
    }

private:
    std::string_view src_;
    std::size_t i_ = 0;
    Pos pos_{1, 1};

    bool at_end() const { return i_ >= src_.size(); }
    char peek(std::size_t ahead = 0) const {
        return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0';
    }
    char advance() {
        char c = src_[i_++];
        if (c == '\n') {
            pos_.line++;
            pos_.col = 1;
        } else {
            pos_.col++;
        }
        return c;
    }

    void skip_trivia() {
        for (;;) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (!at_end() && peek() != '\n') advance();
            } else if (c == '/' && peek(1) == '*') {
                Pos start = pos_;
                advance();
                advance();
                for (;;) {
                    if (at_end())
                        throw Error(ErrorKind::LexError, start, "unterminated block comment");
                    if (peek() == '*' && peek(1) == '/') {
                        advance();
                        advance();
                        break;
                    }
                    advance();
                }
            } else {
                return;
            }
        }
    }

    Token next_token() {
        Pos start = pos_;
        std::size_t from = i_;
        char c = peek();

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
                advance();
            std::string lex(src_.substr(from, i_ - from));
            TokenKind k = is_keyword(lex) ? TokenKind::Keyword : TokenKind::Identifier;
            return Token{k, std::move(lex), "", start};
        }

        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) advance();
            bool isFloat = false;
            if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
                isFloat = true;
                advance();
                while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) advance();
            }
            std::string lex(src_.substr(from, i_ - from));
            return Token{isFloat ? TokenKind::FloatLiteral : TokenKind::IntLiteral,
                         std::move(lex), "", start};
        }

        if (c == '"') return string_literal(start);

        // two-char operators before their one-char prefixes
        static constexpr std::string_view two[] = {"&&", "||", "==", "!=", "<=", ">="};
        for (std::string_view op : two) {
            if (peek() == op[0] && peek(1) == op[1]) {
                advance();
                advance();
                return Token{TokenKind::Punct, std::string(op), "", start};
            }
        }
        static constexpr std::string_view singles = "(){}[];,.=<>+-*/%!";
        if (singles.find(c) != std::string_view::npos) {
            advance();
            return Token{TokenKind::Punct, std::string(1, c), "", start};
        }

        throw Error(ErrorKind::LexError, start,
                    std::string("unexpected character '") + c + "'");
    }

    Token string_literal(Pos start) {
        std::size_t from = i_;
        advance();  // opening quote
        std::string decoded;
        for (;;) {
            if (at_end() || peek() == '\n')
                throw Error(ErrorKind::LexError, start, "unterminated string literal");
            char c = advance();
            if (c == '"') break;
            if (c == '\\') {
                if (at_end())
                    throw Error(ErrorKind::LexError, start, "unterminated string literal");
                char e = advance();
                switch (e) {
                    case 'n': decoded += '\n'; break;
                    case 't': decoded += '\t'; break;
                    case 'r': decoded += '\r'; break;
                    case '\\': decoded += '\\'; break;
                    case '"': decoded += '"'; break;
                    default:
                        throw Error(ErrorKind::LexError, start,
                                    std::string("unknown escape sequence '\\") + e + "'");
                }
            } else {
                decoded += c;
            }
        }
        return Token{TokenKind::StringLiteral, std::string(src_.substr(from, i_ - from)),
                     std::move(decoded), start};
    }
};

}  // namespace detail

// Turns UTF-8 source text into a token sequence ending in exactly one
// end-of-input token. Comments and whitespace are discarded.
inline std::vector<Token> tokenize(std::string_view source) {
    return detail::Lexer(source).run();
}

}  // namespace copl
