#include "sumlevel/checkpoint.hpp"
#include "sumlevel/errors.hpp"
#include "sumlevel/transfer_operator.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <iterator>

using namespace sumlevel;
namespace fs = std::filesystem;

namespace {

class CheckpointFiles : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("sumlevel-ckpt-") + info->name() + "-" +
                                            std::to_string(static_cast<long>(::getpid())));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path file(const std::string& name) const { return dir_ / name; }

    static std::vector<char> read_all(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }
    static void write_all(const fs::path& p, const std::vector<char>& bytes) {
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }

    fs::path dir_;
};

} // namespace

TEST_F(CheckpointFiles, ResumedRunMatchesUninterruptedRun) {
    const auto mesh = Mesh::dyadic(4096, 16);
    LambdaIterator straight(mesh);
    for (int i = 0; i < 59; ++i) straight.advance();

    LambdaIterator first(mesh);
    for (int i = 0; i < 29; ++i) first.advance();
    first.save(file("a.slck"));
    auto resumed = LambdaIterator::resume(file("a.slck"), mesh);
    EXPECT_EQ(resumed.level(), 30);
    EXPECT_EQ(resumed.history(), first.history());
    EXPECT_EQ(resumed.density().values, first.density().values);
    for (int i = 0; i < 30; ++i) resumed.advance();
    EXPECT_EQ(resumed.history(), straight.history());
    EXPECT_FALSE(fs::exists(file("a.slck.tmp")));
}

TEST_F(CheckpointFiles, OperatorRunsResumeAndServeEarlierLevels) {
    OperatorOptions fresh;
    fresh.grid = 4096;
    fresh.mesh = MeshKind::Uniform;
    const auto reference = operator_lambdas(80, fresh);

    OperatorOptions ck = fresh;
    ck.checkpoint_path = file("run.slck");
    ck.checkpoint_every = 7;
    const auto part = operator_lambdas(40, ck);
    EXPECT_EQ(part, std::vector<double>(reference.begin(), reference.begin() + 40));
    EXPECT_EQ(LambdaIterator::resume(file("run.slck"), make_mesh(ck)).level(), 40);

    EXPECT_EQ(operator_lambdas(80, ck), reference);
    EXPECT_EQ(operator_lambdas(25, ck), std::vector<double>(reference.begin(), reference.begin() + 25));
}

TEST_F(CheckpointFiles, MeshMismatchIsRejected) {
    LambdaIterator it(Mesh::dyadic(4096, 16));
    it.save(file("m.slck"));
    EXPECT_THROW(LambdaIterator::resume(file("m.slck"), Mesh::dyadic(8192, 16)), CheckpointError);
    EXPECT_THROW(LambdaIterator::resume(file("m.slck"), Mesh::dyadic(4096, 8)), CheckpointError);
    EXPECT_THROW(LambdaIterator::resume(file("m.slck"), Mesh::uniform(4096)), CheckpointError);
    OperatorOptions other;
    other.grid = 8192;
    other.octaves = 16;
    other.checkpoint_path = file("m.slck");
    EXPECT_THROW(operator_lambdas(5, other), CheckpointError);
}

TEST_F(CheckpointFiles, CorruptionIsDetected) {
    const auto mesh = Mesh::uniform(256);
    LambdaIterator it(mesh);
    it.advance();
    it.save(file("c.slck"));
    const auto good = read_all(file("c.slck"));

    auto flipped = good;
    flipped[good.size() / 2] = static_cast<char>(flipped[good.size() / 2] ^ 0x10);
    write_all(file("flip.slck"), flipped);
    EXPECT_THROW(LambdaIterator::resume(file("flip.slck"), mesh), CheckpointError);

    write_all(file("short.slck"), std::vector<char>(good.begin(), good.begin() + static_cast<long>(good.size()) - 9));
    EXPECT_THROW(LambdaIterator::resume(file("short.slck"), mesh), CheckpointError);

    auto magic = good;
    magic[0] = 'X';
    write_all(file("magic.slck"), magic);
    EXPECT_THROW(LambdaIterator::resume(file("magic.slck"), mesh), CheckpointError);

    auto version = good;
    version[4] = 9;
    write_all(file("version.slck"), version);
    EXPECT_THROW(LambdaIterator::resume(file("version.slck"), mesh), CheckpointError);

    EXPECT_THROW(LambdaIterator::resume(file("missing.slck"), mesh), CheckpointError);
}

TEST_F(CheckpointFiles, HeaderLayout) {
    LambdaIterator it(Mesh::dyadic(512, 8));
    it.advance();
    it.save(file("h.slck"));
    const auto bytes = read_all(file("h.slck"));
    // magic, 4 u32, 2 u64, 513 + 2 doubles, u64 checksum
    EXPECT_EQ(bytes.size(), 4U + 16U + 16U + 8U * (513U + 2U) + 8U);
    EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "SLCK");
}

TEST(CheckpointNames, FileNameAndEnvironment) {
    EXPECT_EQ(checkpoint_file_name("dyadic", 65536, 32), "lambda-dyadic-65536-32.slck");
    ::unsetenv(kCheckpointDirEnv);
    EXPECT_FALSE(checkpoint_dir_from_env().has_value());
    ::setenv(kCheckpointDirEnv, "", 1);
    EXPECT_FALSE(checkpoint_dir_from_env().has_value());
    ::setenv(kCheckpointDirEnv, "/tmp/sumlevel-ck", 1);
    EXPECT_EQ(checkpoint_dir_from_env(), fs::path("/tmp/sumlevel-ck"));
    ::unsetenv(kCheckpointDirEnv);
}
