#include <doctest.h>

#include <numeric>

#include "aerofit/png_io.hpp"
#include "aerofit/template_store.hpp"
#include "test_util.hpp"

using namespace aerofit;
using testutil::code_of;
using testutil::TempDir;

namespace {

BinaryMask block(int w, int h, int x0, int y0, int bw, int bh) {
    BinaryMask m(w, h);
    for (int y = y0; y < y0 + bh; ++y)
        for (int x = x0; x < x0 + bw; ++x) m.set(x, y, true);
    return m;
}

}  // namespace

TEST_CASE("builtin catalog mirrors the four studied routines") {
    const auto cat = builtin_catalog();
    REQUIRE(cat.size() == 4);
    CHECK(cat[0] == std::pair<std::string, int>{"jumping jack", 3});
    CHECK(cat[1].first == "squat");
    CHECK(cat[2].first == "lateral flexion stretches");
    CHECK(cat[3].first == "shoulder front raises");
    const int total = std::accumulate(cat.begin(), cat.end(), 0,
                                      [](int acc, const auto& r) { return acc + r.second; });
    CHECK(total == 12);
}

TEST_CASE("template ids") {
    CHECK(make_template_id("jumping jack", 2) == "jumping-jack-2");
    CHECK(make_template_id("  Lateral  Flexion/Stretches ", 1) == "lateral-flexion-stretches-1");
}

TEST_CASE("builtin store") {
    const TemplateStore store = builtin_store();
    CHECK(store.template_count() == 12);
    CHECK(store.routines().size() == 4);
    CHECK(store.dimensions() == std::pair{128, 128});
    for (std::size_t i = 0; i < store.template_count(); ++i) {
        const Template& t = store.at(i);
        CHECK(!t.mask.empty());
        // Templates are fixed points of the session cleanup filter.
        CHECK(clean_mask(t.mask, 1) == t.mask);
        for (std::size_t j = 0; j < i; ++j) CHECK(jaccard(t.mask, store.at(j).mask).value() < 0.8);
    }
    CHECK(store.at(0).id == "jumping-jack-1");
    CHECK(store.position_of("squat-1") == 3u);
    CHECK(store.find_routine("squat")->templates.size() == 3);
    CHECK(store.find_template("nope") == nullptr);
    CHECK(builtin_store(64).dimensions() == std::pair{64, 64});
}

TEST_CASE("store validation") {
    const BinaryMask a = block(8, 8, 1, 1, 3, 3);
    SUBCASE("mixed dimensions") {
        std::vector<Routine> r = {{"r", {{"", "r", 1, a}, {"", "r", 2, block(4, 4, 0, 0, 2, 2)}}}};
        CHECK(code_of([&] { TemplateStore{r}; }) == ErrorCode::DimensionMismatch);
    }
    SUBCASE("empty mask") {
        std::vector<Routine> r = {{"r", {{"", "r", 1, BinaryMask(8, 8)}}}};
        CHECK(code_of([&] { TemplateStore{r}; }) == ErrorCode::EmptyMask);
    }
    SUBCASE("duplicate sequence") {
        std::vector<Routine> r = {{"r", {{"", "r", 1, a}, {"", "r", 1, a}}}};
        CHECK(code_of([&] { TemplateStore{r}; }) == ErrorCode::DuplicateSequence);
    }
    SUBCASE("gap in sequence") {
        std::vector<Routine> r = {{"r", {{"", "r", 1, a}, {"", "r", 3, a}}}};
        CHECK(code_of([&] { TemplateStore{r}; }) == ErrorCode::InvalidRoutine);
    }
    SUBCASE("more than three templates") {
        std::vector<Routine> r = {{"r", {{"", "r", 1, a}, {"", "r", 2, a}, {"", "r", 3, a}, {"", "r", 4, a}}}};
        CHECK(code_of([&] { TemplateStore{r}; }) == ErrorCode::InvalidRoutine);
    }
    SUBCASE("unsorted input is ordered by sequence") {
        const BinaryMask b = block(8, 8, 4, 4, 2, 2);
        TemplateStore s({{"r", {{"", "r", 2, b}, {"", "r", 1, a}}}});
        CHECK(s.at(0).id == "r-1");
        CHECK(s.at(0).mask == a);
    }
    SUBCASE("copies keep working refs") {
        TemplateStore s({{"r", {{"", "r", 1, a}}}});
        const TemplateStore copy = s;
        CHECK(copy.refs()[0].mask == &copy.at(0).mask);
        CHECK(*copy.refs()[0].mask == a);
    }
}

TEST_CASE("save and load") {
    TempDir dir("store");
    const TemplateStore store = builtin_store();

    SUBCASE("round trip keeps every bit and all metadata") {
        save_store(store, dir.path());
        const TemplateStore loaded = load_store(dir.path());
        REQUIRE(loaded.template_count() == store.template_count());
        REQUIRE(loaded.routines().size() == 4);
        for (std::size_t i = 0; i < store.template_count(); ++i) {
            CHECK(loaded.at(i).id == store.at(i).id);
            CHECK(loaded.at(i).routine == store.at(i).routine);
            CHECK(loaded.at(i).sequence == store.at(i).sequence);
            CHECK(loaded.at(i).mask == store.at(i).mask);
        }
    }
    SUBCASE("writing twice is byte-identical") {
        TempDir other("store2");
        save_store(store, dir.path());
        save_store(store, other.path());
        CHECK(testutil::slurp(dir / "manifest") == testutil::slurp(other / "manifest"));
        for (std::size_t i = 0; i < store.template_count(); ++i) {
            const std::string rel = "templates/" + store.at(i).id + ".png";
            CHECK(testutil::slurp(dir / rel) == testutil::slurp(other / rel));
        }
    }
    SUBCASE("empty store") {
        save_store(TemplateStore{}, dir.path());
        const TemplateStore loaded = load_store(dir.path());
        CHECK(loaded.empty());
        CHECK(loaded.routines().empty());
    }
    SUBCASE("missing manifest") {
        CHECK(code_of([&] { load_store(dir.path()); }) == ErrorCode::MissingManifest);
    }
    SUBCASE("manifest names a missing PNG") {
        testutil::spit(dir / "manifest", "squat\t1\tnot-there.png\n");
        CHECK(code_of([&] { load_store(dir.path()); }) == ErrorCode::MissingManifest);
    }
    SUBCASE("templates of differing size") {
        png::write_mask(dir / "a.png", block(64, 64, 10, 10, 5, 5));
        png::write_mask(dir / "b.png", block(32, 32, 10, 10, 5, 5));
        testutil::spit(dir / "manifest", "# comment\nsquat\t1\ta.png\nsquat\t2\tb.png\n");
        CHECK(code_of([&] { load_store(dir.path()); }) == ErrorCode::DimensionMismatch);
    }
    SUBCASE("duplicate sequence in manifest") {
        png::write_mask(dir / "a.png", block(16, 16, 1, 1, 5, 5));
        testutil::spit(dir / "manifest", "squat\t1\ta.png\nsquat\t1\ta.png\n");
        CHECK(code_of([&] { load_store(dir.path()); }) == ErrorCode::DuplicateSequence);
    }
    SUBCASE("empty template mask") {
        png::write_mask(dir / "a.png", BinaryMask(16, 16));
        testutil::spit(dir / "manifest", "squat\t1\ta.png\n");
        CHECK(code_of([&] { load_store(dir.path()); }) == ErrorCode::EmptyMask);
    }
    SUBCASE("malformed line") {
        testutil::spit(dir / "manifest", "squat 1 a.png\n");
        CHECK(code_of([&] { load_store(dir.path()); }) == ErrorCode::Parse);
    }
    SUBCASE("hand-authored routine") {
        png::write_mask(dir / "masks/one.png", block(16, 16, 2, 2, 6, 6));
        png::write_mask(dir / "masks/two.png", block(16, 16, 8, 8, 6, 6));
        testutil::spit(dir / "manifest", "arm circles\t2\tmasks/two.png\r\narm circles\t1\tmasks/one.png\n");
        const TemplateStore s = load_store(dir.path());
        REQUIRE(s.template_count() == 2);
        CHECK(s.at(0).id == "arm-circles-1");
        CHECK(s.at(1).mask == block(16, 16, 8, 8, 6, 6));
    }
}
