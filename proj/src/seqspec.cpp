#include "cafe/seqspec.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "cafe/design.hpp"
#include "cafe/error.hpp"

namespace cafe {

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    SequenceSpec parse()
    {
        SequenceSpec s;
        const std::string word = keyword();
        if (word == "FREE") {
            s.kind = SequenceSpec::Kind::Free;
        } else if (word == "UDD") {
            s.kind = SequenceSpec::Kind::UDD;
            expect('(');
            s.N = integer("N");
            if (accept(',')) s.alternate_signs = sign_word();
            expect(')');
        } else if (word == "SUDD") {
            s.kind = SequenceSpec::Kind::SmoothUDD;
            expect('(');
            s.N = integer("N");
            expect(')');
        } else if (word == "CAFE") {
            expect('(');
            s.N = integer("N");
            expect(',');
            s.m = integer("m");
            if (accept(',')) {
                s.kind = SequenceSpec::Kind::CafeSpliced;
                s.root_index = integer("r");
                expect(')');
                skip_space();
                if (pos_ >= text_.size() || std::tolower(static_cast<unsigned char>(text_[pos_])) != 'x')
                    fail("expected 'x' and a repetition count after CAFE(N,m,r)");
                ++pos_;
                s.repetitions = integer("L");
            } else {
                s.kind = SequenceSpec::Kind::CafeRaw;
                expect(')');
            }
        } else if (word == "PT") {
            s.kind = SequenceSpec::Kind::PulseTrain;
            s.alternate_signs = true;
            expect('(');
            s.N = integer("N");
            expect(',');
            s.duty_cycle = real("d");
            while (accept(',')) {
                const std::string opt = keyword();
                if (opt == "SIN2")
                    s.shape = PulseShape::SineSquared;
                else if (opt == "RECT")
                    s.shape = PulseShape::Rectangular;
                else if (opt == "ALT")
                    s.alternate_signs = true;
                else if (opt == "NOALT")
                    s.alternate_signs = false;
                else
                    fail("unknown pulse-train option '" + opt + "' (sin2, rect, alt, noalt)");
            }
            expect(')');
        } else if (word.empty()) {
            fail("expected a sequence name");
        } else {
            fail("unknown sequence '" + word + "' (FREE, UDD, SUDD, CAFE, PT)");
        }
        skip_space();
        if (pos_ != text_.size()) fail("unexpected trailing text");
        return s;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const
    {
        throw Error(ErrorKind::InvalidParameter, "sequence \"" + std::string(text_) + "\" at column " +
                                                     std::to_string(pos_ + 1) + ": " + msg);
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    std::string keyword()
    {
        skip_space();
        std::string out;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_])))
            out += static_cast<char>(std::toupper(static_cast<unsigned char>(text_[pos_++])));
        // a keyword may end in a digit ("sin2")
        if (out == "SIN" && pos_ < text_.size() && text_[pos_] == '2') {
            out += '2';
            ++pos_;
        }
        return out;
    }

    bool sign_word()
    {
        const std::string w = keyword();
        if (w == "ALT") return true;
        if (w == "NOALT") return false;
        fail("expected alt or noalt");
    }

    int integer(const char* what)
    {
        skip_space();
        int v = 0;
        const auto* first = text_.data() + pos_;
        const auto [ptr, ec] = std::from_chars(first, text_.data() + text_.size(), v);
        if (ec != std::errc() || ptr == first) fail(std::string("expected an integer for ") + what);
        pos_ += static_cast<std::size_t>(ptr - first);
        return v;
    }

    double real(const char* what)
    {
        skip_space();
        double v = 0.0;
        const auto* first = text_.data() + pos_;
        const auto [ptr, ec] = std::from_chars(first, text_.data() + text_.size(), v);
        if (ec != std::errc() || ptr == first) fail(std::string("expected a number for ") + what);
        pos_ += static_cast<std::size_t>(ptr - first);
        return v;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

SequenceSpec parse_sequence_spec(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const SequenceSpec& s)
{
    std::ostringstream o;
    switch (s.kind) {
    case SequenceSpec::Kind::Free: o << "FREE"; break;
    case SequenceSpec::Kind::UDD:
        o << "UDD(" << s.N << (s.alternate_signs ? ",alt" : "") << ")";
        break;
    case SequenceSpec::Kind::SmoothUDD: o << "SUDD(" << s.N << ")"; break;
    case SequenceSpec::Kind::CafeRaw: o << "CAFE(" << s.N << "," << s.m << ")"; break;
    case SequenceSpec::Kind::CafeSpliced:
        o << "CAFE(" << s.N << "," << s.m << "," << s.root_index << ")x" << s.repetitions;
        break;
    case SequenceSpec::Kind::PulseTrain:
        o << "PT(" << s.N << "," << s.duty_cycle;
        if (s.shape == PulseShape::Rectangular) o << ",rect";
        if (!s.alternate_signs) o << ",noalt";
        o << ")";
        break;
    }
    return o.str();
}

ControlSequence build_sequence(const SequenceSpec& s, double T)
{
    switch (s.kind) {
    case SequenceSpec::Kind::Free: return make_free_evolution(T);
    case SequenceSpec::Kind::UDD: return make_udd(s.N, T, s.alternate_signs);
    case SequenceSpec::Kind::SmoothUDD: return make_smooth_udd(s.N, T);
    case SequenceSpec::Kind::CafeRaw: {
        require(s.m >= 1, "CAFE needs m >= 1");
        return make_cafe_raw(s.N, catalog_solution(s.N, s.m).lambdas, T);
    }
    case SequenceSpec::Kind::CafeSpliced:
        return catalog_entry(s.N, s.m, s.root_index, s.repetitions, T);
    case SequenceSpec::Kind::PulseTrain:
        return make_pulse_train(s.N, s.duty_cycle, T, s.shape, s.alternate_signs);
    }
    throw Error(ErrorKind::InvalidParameter, "unknown sequence kind");
}

ControlSequence make_sequence(std::string_view text, double T)
{
    return build_sequence(parse_sequence_spec(text), T);
}

std::vector<std::string> low_slew_group()
{
    return {"CAFE(3,5,2)x4", "PT(4,0.015)", "PT(6,0.0225)", "PT(8,0.03)"};
}

std::vector<std::string> high_slew_group() { return {"CAFE(3,5,1)x6", "PT(2,0.002)", "PT(8,0.008)"}; }

std::vector<std::string> cafe_x2_comparators() { return {"PT(4,0.031)", "PT(8,0.062)"}; }

}  // namespace cafe
