#include "tsyn/timed_word.hpp"

#include <cctype>

#include "tsyn/errors.hpp"

namespace tsyn {

TimedWord::TimedWord(std::vector<TimedLetter> letters) : letters_(std::move(letters)) {
    Rational prev(0);
    for (const auto& l : letters_) {
        if (l.time < prev) throw DomainError("timed word is not monotone");
        if (l.time == prev && &l != &letters_.front()) strict_ = false;
        prev = l.time;
    }
    if (!letters_.empty() && letters_.front().time.is_negative())
        throw DomainError("negative timestamp");
}

std::vector<std::string> TimedWord::untime() const {
    std::vector<std::string> out;
    out.reserve(letters_.size());
    for (const auto& l : letters_) out.push_back(l.symbol);
    return out;
}

std::string TimedWord::str() const {
    std::string out;
    for (const auto& l : letters_) out += "(" + l.symbol + "," + l.time.str() + ")";
    return out;
}

namespace {

Rational parse_time(const std::string& text, std::size_t& pos) {
    std::size_t start = pos;
    auto digits = [&]() {
        std::size_t s = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == s) throw ParseError("expected digits in timestamp", pos);
        return text.substr(s, pos - s);
    };
    std::string ip = digits();
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        std::string q = digits();
        return Rational(std::stoll(ip), std::stoll(q));
    }
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::string fr = digits();
        std::int64_t den = 1;
        for (std::size_t i = 0; i < fr.size(); ++i) {
            if (den > INT64_MAX / 10) throw ParseError("timestamp too precise", start);
            den *= 10;
        }
        return Rational(std::stoll(ip)) + Rational(std::stoll(fr), den);
    }
    return Rational(std::stoll(ip));
}

}  // namespace

TimedWord parse_timed_word(const std::string& text) {
    std::vector<TimedLetter> letters;
    std::size_t pos = 0;
    auto skip_ws = [&]() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    skip_ws();
    while (pos < text.size()) {
        if (text[pos] != '(') throw ParseError("expected '('", pos);
        ++pos;
        skip_ws();
        std::size_t s = pos;
        while (pos < text.size() && text[pos] != ',' && text[pos] != ')' &&
               !std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
        if (s == pos) throw ParseError("expected symbol", pos);
        std::string sym = text.substr(s, pos - s);
        skip_ws();
        if (pos >= text.size() || text[pos] != ',') throw ParseError("expected ','", pos);
        ++pos;
        skip_ws();
        Rational t = parse_time(text, pos);
        skip_ws();
        if (pos >= text.size() || text[pos] != ')') throw ParseError("expected ')'", pos);
        ++pos;
        letters.push_back({std::move(sym), t});
        skip_ws();
    }
    try {
        return TimedWord(std::move(letters));
    } catch (const DomainError& e) {
        throw ParseError(e.what(), text.size());
    }
}

}  // namespace tsyn
