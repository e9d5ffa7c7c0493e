#include "bergman_limits/commands.hpp"
#include "doctest.h"

using namespace bl;

TEST_CASE("config: keys, types, unknown keys") {
  const RunConfig c = config_from_json(R"({"command": "fredholm", "domain": "ball2", "nu": 1.5, "lambda": [0.5, -1],
                                           "degree": 6, "threads": 2})");
  CHECK(c.command == "fredholm");
  CHECK(c.domain == "ball2");
  CHECK(c.nu == 1.5);
  CHECK(c.lambda == cplx(0.5, -1));
  CHECK(c.degree == 6);
  CHECK(c.threads == 2);
  CHECK(c.p == 2.0);

  auto code = [](const std::string& text) {
    try {
      config_from_json(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Internal;
  };
  CHECK(code(R"({"command": "spectrum", "colour": 1})") == ErrorCode::InvalidArgument);
  CHECK(code(R"({"nu": "zero"})") == ErrorCode::Parse);
  CHECK(code("[1, 2]") == ErrorCode::Parse);
  CHECK(code("{") == ErrorCode::Parse);
}

TEST_CASE("exit codes and run_command errors") {
  CHECK(exit_code_for(ErrorCode::Parse) == 2);
  CHECK(exit_code_for(ErrorCode::InvalidArgument) == 2);
  CHECK(exit_code_for(ErrorCode::NotAdmissible) == 3);
  CHECK(exit_code_for(ErrorCode::Accuracy) == 4);
  CHECK(exit_code_for(ErrorCode::VerifyFailed) == 1);
  CHECK(exit_code_for(ErrorCode::Io) == 5);
  CHECK(exit_code_for(ErrorCode::Internal) == 5);

  RunConfig c;
  c.command = "transmogrify";
  c.out = "/nonexistent-dir-for-tests";
  const RunResult r = run_command(c);
  CHECK(r.exit_code == 2);
  CHECK(r.files.empty());
  CHECK(r.summary.find("transmogrify") != std::string::npos);
  c.command = "spectrum";
  c.nu = -1.0;
  CHECK(run_command(c).exit_code == 3);
}

TEST_CASE("domain and sequence names") {
  CHECK(parse_domain("disk").kind() == DomainKind::UnitDisk);
  CHECK(parse_domain("ball3").n() == 3);
  CHECK(parse_domain("matrix").kind() == DomainKind::MatrixBall);
  CHECK_THROWS_AS(parse_domain("ball9"), Error);
  const Domain disk = Domain::unit_disk();
  CHECK(parse_sequences(disk, "default").size() == 9);
  const auto s = parse_sequences(disk, "rays:4,spiral");
  REQUIRE(s.size() == 5);
  CHECK(s[4].kind() == SequenceKind::TangentialSpiral);
  CHECK(std::abs(s[1].point(1)[0] - cplx(0, sequence_radius(1))) < 1e-15);
  CHECK_THROWS_AS(parse_sequences(disk, "rays:x"), Error);
  CHECK_THROWS_AS(parse_sequences(disk, "zigzag"), Error);
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}
