#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cafe/error.hpp"
#include "cafe/export.hpp"
#include "cafe/seqspec.hpp"

using namespace cafe;

TEST_CASE("parse and print")
{
    for (const char* s : {"FREE", "UDD(4)", "UDD(3,alt)", "SUDD(3)", "CAFE(3,5)", "CAFE(3,5,2)x2", "PT(4,0.031)",
                          "PT(4,0.031,noalt)", "PT(2,0.5,rect)"})
        CHECK(to_string(parse_sequence_spec(s)) == s);
    const auto p = parse_sequence_spec(" cafe( 3 , 5 , 1 ) x 6 ");
    CHECK(p.kind == SequenceSpec::Kind::CafeSpliced);
    CHECK(p.root_index == 1);
    CHECK(p.repetitions == 6);
    CHECK(parse_sequence_spec("PT(4,0.1)").alternate_signs);
    CHECK_FALSE(parse_sequence_spec("UDD(4)").alternate_signs);
}

TEST_CASE("parse errors name the column")
{
    for (const char* s : {"", "UDD", "UDD(x)", "CAFE(3,5", "PT(4)", "CAFE(3,5,2)", "FREE junk", "PT(4,0.1,wobble)"}) {
        INFO(s);
        try {
            parse_sequence_spec(s);
            FAIL("should not parse");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InvalidParameter);
            CHECK(std::string(e.what()).find("column") != std::string::npos);
        }
    }
}

TEST_CASE("built sequences carry their parameters")
{
    const auto seq = make_sequence("PT(8,0.062)", 2.0);
    CHECK(seq.family() == Family::PulseTrain);
    CHECK(seq.duration() == 2.0);
    CHECK(seq.params().duty_cycle == 0.062);
    CHECK(make_sequence("CAFE(3,5,2)x2").family() == Family::CafeSpliced);
}

TEST_CASE("number formatting round-trips")
{
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) CHECK(std::stod(format_number(v)) == v);
    CHECK(format_number(std::nan("")).empty());
    CHECK(file_stem("CAFE(3,5,2)x2") == "CAFE_3_5_2_x2");
    CHECK(file_stem("PT(4,0.031,noalt)") == "PT_4_0.031_noalt");
}

TEST_CASE("csv and json tables")
{
    Table t{{"a", "b"}, {{1.0, std::nan("")}, {0.5, 2.0}}};
    std::ostringstream o;
    write_csv(o, t);
    CHECK(o.str() == "a,b\n1,\n0.5,2\n");
    const auto j = table_json(t);
    CHECK(j["columns"][1] == "b");
    CHECK(j["rows"][0][1].is_null());
    CHECK(j["rows"][1][0] == 0.5);
}
