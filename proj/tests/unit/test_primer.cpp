#include <doctest.h>

#include <regex>

#include "reprokit/error.hpp"
#include "reprokit/primer.hpp"
#include "support.hpp"

using namespace reprokit;
using namespace testsupport;

namespace {

const char* kManifest =
    R"({"app_id": "tiny", "app_version": "0.1", "main_activity": "Main"})";

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::io_error;
}

}  // namespace

TEST_SUITE("primer") {

TEST_CASE("minidoc has two activities and four components") {
  const auto model = parse_bundle(minidoc_dir());
  CHECK(model.app_id == "minidoc");
  CHECK(model.app_version == "1.0");
  CHECK(model.activities.size() == 2);
  CHECK(model.components.size() == 4);
  CHECK(model.type_vocabulary == std::vector<std::string>{"Button", "EditText"});
  CHECK(component_types(model) == std::vector<std::string>{"Button", "EditText"});

  const auto* ok = model.find(ComponentKey{"Main", "btn_ok", 1});
  REQUIRE(ok != nullptr);
  CHECK(ok->text == "OK");
  CHECK(to_string(ok->relative_location) == "Middle Center");
  CHECK(ok->supported_actions == ActionSet{ActionKind::click});
  const auto* open = model.find(ComponentKey{"Main", "btn_open", 1});
  REQUIRE(open != nullptr);
  CHECK(to_string(open->relative_location) == "Top Center");
  const auto* page = model.find(ComponentKey{"Viewer", "txt_page", 1});
  REQUIRE(page != nullptr);
  CHECK(page->supported_actions == ActionSet{ActionKind::click, ActionKind::type});
}

TEST_CASE("manifest with one empty layout gives one activity and no components") {
  TempDir dir;
  write_text(dir / "manifest.json", kManifest);
  write_text(dir / "layouts/Main.w0.xml", R"(<layout activity="Main" window="w0"/>)");
  const auto model = parse_bundle(dir.path());
  CHECK(model.activities == std::vector<std::string>{"Main"});
  CHECK(model.components.empty());
  CHECK(model.type_vocabulary.empty());
  CHECK(component_types(model).empty());
}

TEST_CASE("same resource id in two activities gives two keys") {
  TempDir dir;
  write_text(dir / "manifest.json", kManifest);
  write_text(dir / "layouts/Main.w0.xml",
             R"(<layout activity="Main" window="w0"><Button id="btn_ok" text="OK" bounds="0,0,100,100"/></layout>)");
  write_text(dir / "layouts/Viewer.w0.xml",
             R"(<layout activity="Viewer" window="w0"><Button id="btn_ok" text="OK" bounds="0,0,100,100"/></layout>)");
  const auto model = parse_bundle(dir.path());
  REQUIRE(model.components.size() == 2);
  CHECK(model.find(ComponentKey{"Main", "btn_ok", 1}) != nullptr);
  CHECK(model.find(ComponentKey{"Viewer", "btn_ok", 1}) != nullptr);
}

TEST_CASE("three buttons give a one-type vocabulary") {
  TempDir dir;
  write_text(dir / "manifest.json", kManifest);
  write_text(dir / "layouts/Main.w0.xml", R"(<layout activity="Main" window="w0">
  <Button id="a" bounds="0,0,10,10"/>
  <Button id="b" bounds="0,10,10,20"/>
  <group><Button id="c" bounds="0,20,10,30"/></group>
</layout>)");
  CHECK(component_types(parse_bundle(dir.path())) == std::vector<std::string>{"Button"});
}

TEST_CASE("sources index links units and warns on unknown ids") {
  const auto bundle = load_bundle(minidoc_dir());
  const auto linked = link_sources(build_static_model(bundle), bundle);
  CHECK(linked.warnings.empty());
  CHECK(linked.model.find(ComponentKey{"Main", "btn_ok", 1})->source_units ==
        std::vector<std::string>{"MainScreen.src"});

  auto empty = bundle;
  empty.sources.clear();
  for (const auto& c : link_sources(build_static_model(empty), empty).model.components) {
    CHECK(c.source_units.empty());
  }

  auto ghost = bundle;
  ghost.sources.clear();
  ghost.sources["ghost"] = {"Ghost.src"};
  const auto base = build_static_model(ghost);
  const auto result = link_sources(base, ghost);
  CHECK(result.model == base);
  REQUIRE(result.warnings.size() == 1);
  CHECK(result.warnings[0].find("ghost") != std::string::npos);
}

TEST_CASE("missing manifest is a malformed bundle") {
  TempDir dir;
  write_text(dir / "layouts/Main.w0.xml", R"(<layout activity="Main" window="w0"/>)");
  CHECK(kind_of([&] { load_bundle(dir.path()); }) == ErrorKind::bundle_malformed);
}

TEST_CASE("main activity without a layout is a malformed bundle") {
  TempDir dir;
  write_text(dir / "manifest.json", kManifest);
  write_text(dir / "layouts/Other.w0.xml", R"(<layout activity="Other" window="w0"/>)");
  CHECK(kind_of([&] { load_bundle(dir.path()); }) == ErrorKind::bundle_malformed);
}

TEST_CASE("XML syntax errors carry file and line") {
  TempDir dir;
  write_text(dir / "manifest.json", kManifest);
  write_text(dir / "layouts/Main.w0.xml",
             "<layout activity=\"Main\" window=\"w0\">\n  <Button id=\"a\" bounds=\"0,0,1,1\">\n</layout>\n");
  try {
    load_bundle(dir.path());
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.file() == "layouts/Main.w0.xml");
    CHECK(e.line() == 3);
    CHECK(e.kind() == ErrorKind::parse_error);
  }
}

TEST_CASE("duplicate id within one layout is rejected") {
  TempDir dir;
  write_text(dir / "manifest.json", kManifest);
  write_text(dir / "layouts/Main.w0.xml", R"(<layout activity="Main" window="w0">
  <Button id="a" bounds="0,0,10,10"/>
  <Button id="a" bounds="0,10,10,20"/>
</layout>)");
  CHECK(kind_of([&] { load_bundle(dir.path()); }) == ErrorKind::duplicate_id);
}

TEST_CASE("layout attribute errors") {
  const ScreenDims d;
  CHECK(kind_of([&] { parse_layout(R"(<layout activity="M" window="w"><Button bounds="0,0,1,1"/></layout>)", "x", d); }) ==
        ErrorKind::parse_error);
  CHECK_THROWS(parse_layout(R"(<layout activity="M" window="w"><Button id="a" bounds="0,0,5000,1"/></layout>)", "x", d));
  CHECK_THROWS(parse_layout(R"(<layout activity="M" window="w"><Button id="a" bounds="0,0,0,1"/></layout>)", "x", d));
  CHECK_THROWS(parse_layout(R"(<layout activity="M" window="w"><Button id="a" bounds="0,0,1,1" actions="poke"/></layout>)", "x", d));
}

TEST_CASE("explicit actions override defaults") {
  const auto layout = parse_layout(
      R"(<layout activity="M" window="w"><TextView id="a" bounds="0,0,10,10" actions="long-click,click"/><TextView id="b" bounds="0,0,10,10"/></layout>)",
      "x", ScreenDims{});
  CHECK(layout.components[0].supported_actions ==
        ActionSet{ActionKind::click, ActionKind::long_click});
  CHECK(layout.components[1].supported_actions.empty());
}

TEST_CASE("static model parse is deterministic and serializes round-trip") {
  const auto a = parse_bundle(minidoc_dir());
  const auto b = parse_bundle(minidoc_dir());
  CHECK(a == b);
  const auto text = serialize_static_model(a);
  CHECK(parse_static_model(text) == a);
  CHECK(serialize_static_model(parse_static_model(text)) == text);
}

TEST_CASE("component count matches a brute-force count of ids") {
  for (std::uint32_t seed = 1; seed <= 15; ++seed) {
    TempDir dir;
    generate_bundle(dir.path(), seed);
    std::size_t expected = 0;
    const std::regex id_attr(R"(<\w+ id=")");
    for (const auto& entry : fs::directory_iterator(dir / "layouts")) {
      const auto text = read_text(entry.path());
      expected += std::distance(std::sregex_iterator(text.begin(), text.end(), id_attr),
                                std::sregex_iterator());
    }
    CHECK(parse_bundle(dir.path()).components.size() == expected);
  }
}

}  // TEST_SUITE
