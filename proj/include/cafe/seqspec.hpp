#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cafe/control.hpp"

namespace cafe {

/// Parsed sequence name. Grammar (whitespace ignored, keywords case-insensitive):
///
///   spec  := "FREE"
///          | "UDD(" int [ "," sign ] ")"
///          | "SUDD(" int ")"
///          | "CAFE(" int "," int ")"                    raw, unspliced
///          | "CAFE(" int "," int "," int ")" "x" int     spliced and repeated
///          | "PT(" int "," real { "," option } ")"
///   sign  := "alt" | "noalt"
///   option:= "sin2" | "rect" | sign
struct SequenceSpec {
    enum class Kind { Free, UDD, SmoothUDD, CafeRaw, CafeSpliced, PulseTrain };
    Kind kind = Kind::Free;
    int N = 0;
    int m = 0;
    int root_index = 0;
    int repetitions = 0;
    double duty_cycle = 0.0;
    PulseShape shape = PulseShape::SineSquared;
    bool alternate_signs = false;  // UDD default off, PT default on
};

/// Throws Error(InvalidParameter) with the offending position.
SequenceSpec parse_sequence_spec(std::string_view text);
std::string to_string(const SequenceSpec& spec);

ControlSequence build_sequence(const SequenceSpec& spec, double T = 1.0);
ControlSequence make_sequence(std::string_view text, double T = 1.0);

/// Sequences of roughly equal max slew rate, CAFE member first.
/// Low: about 7e5 (CAFE(3,5,2)x4 and three sine-squared trains with N/d near 266).
/// High: about 1e7 (CAFE(3,5,1)x6 and two trains with N/d near 1000).
std::vector<std::string> low_slew_group();
std::vector<std::string> high_slew_group();
/// Sign-alternating trains with the same max slew as CAFE(3,5,2)x2 (about 1.64e5).
std::vector<std::string> cafe_x2_comparators();

}  // namespace cafe
