#include "fnet/analysis.hpp"

#include "fnet/parser.hpp"
#include "fnet/resolver.hpp"
#include "support/generators.hpp"

#include <doctest.h>

using namespace fnet;
using namespace fnet::testgen;

namespace {

FeatureView parse_view(const std::string& source) {
    Parsed<ViewFragment> parsed = parse_view_source(source, "view.fview");
    REQUIRE(parsed.ok());
    return std::move(*parsed.value);
}

ResolvedNet resolve_source(const std::string& source) {
    Parsed<NetFragment> parsed = parse_net_source(source, "net.fnet");
    REQUIRE(parsed.ok());
    std::vector<NetFragment> fragments{std::move(*parsed.value)};
    ResolutionResult result = resolve_model(fragments);
    REQUIRE(result.ok());
    return std::move(*result.net);
}

} // namespace

TEST_CASE("blocks_of_view unions bindings and matched endpoints") {
    const ResolvedNet net = load_corpus_net();
    // Exact-endpoint variant: the view references leaves directly.
    const FeatureView view = parse_view(
        "view V {\n"
        "  block BrakePedalSensor\n  block DistanceControl\n"
        "  block BrakeLogic\n  block HydraulicActuation\n"
        "  connect BrakePedalSensor -> BrakeLogic : [pedalPosition]\n"
        "  connect DistanceControl -> BrakeLogic : [decelRequest]\n"
        "  connect BrakeLogic -> HydraulicActuation : [brakeTorque]\n"
        "}");
    ViewBlocksResult result = blocks_of_view(net, view);
    REQUIRE(result.ok());
    CHECK(result.paths == std::set<std::string>{
                              "Vehicle.ACC.DistanceControl",
                              "Vehicle.Brake.BrakeLogic",
                              "Vehicle.Brake.HydraulicActuation",
                              "Vehicle.DriverInput.BrakePedalSensor",
                          });
}

TEST_CASE("the corpus view adds its abstracted blocks") {
    const ResolvedNet net = load_corpus_net();
    const FeatureView view = load_corpus_view();
    ViewBlocksResult result = blocks_of_view(net, view);
    REQUIRE(result.ok());
    // Computed by composing the binding and matching oracles by hand: the
    // view binds ACC and Brake as superblocks, matching pulls in the
    // concrete endpoints underneath them.
    CHECK(result.paths == std::set<std::string>{
                              "Vehicle.ACC",
                              "Vehicle.ACC.DistanceControl",
                              "Vehicle.Brake",
                              "Vehicle.Brake.BrakeLogic",
                              "Vehicle.Brake.HydraulicActuation",
                              "Vehicle.DriverInput.BrakePedalSensor",
                          });
}

TEST_CASE("empty and env-only views touch nothing") {
    const ResolvedNet net = load_corpus_net();
    ViewBlocksResult empty = blocks_of_view(net, parse_view("view E { }"));
    REQUIRE(empty.ok());
    CHECK(empty.paths.empty());

    ViewBlocksResult envs = blocks_of_view(
        net, parse_view("view E { env block Driver  env block Road }"));
    REQUIRE(envs.ok());
    CHECK(envs.paths.empty());
}

TEST_CASE("inconsistent views propagate their diagnostics") {
    const ResolvedNet net = load_corpus_net();
    ViewBlocksResult result =
        blocks_of_view(net, parse_view("view V { block AutoPilot }"));
    CHECK_FALSE(result.ok());
    CHECK(result.paths.empty());
    REQUIRE(result.diagnostics.size() == 1);
    CHECK(result.diagnostics[0].code == DiagCode::V001);
}

TEST_CASE("impact by direct reference") {
    const ResolvedNet net = load_corpus_net();
    const std::vector<FeatureView> views{load_corpus_view()};
    std::string error;
    std::optional<ElementRef> element =
        parse_element_ref(net, "Vehicle.Brake.BrakeLogic", error);
    REQUIRE(element);
    ImpactReport report = impact(net, views, *element);
    REQUIRE_FALSE(report.hits.empty());
    bool direct = false;
    for (const ImpactHit& hit : report.hits) {
        if (hit.view == "Braking" && hit.reason == "direct-reference") {
            direct = true;
        }
    }
    CHECK(direct);
}

TEST_CASE("impact reaches blocks hidden behind superblock matches") {
    const ResolvedNet net = load_corpus_net();
    const std::vector<FeatureView> views{load_corpus_view()};
    std::string error;
    std::optional<ElementRef> element =
        parse_element_ref(net, "Vehicle.ACC.DistanceControl", error);
    REQUIRE(element);
    ImpactReport report = impact(net, views, *element);
    REQUIRE(report.hits.size() == 1);
    CHECK(report.hits[0].view == "Braking");
    CHECK(report.hits[0].reason == "superblock-match");
    CHECK(report.hits[0].element == "ACC -> BrakeLogic");
}

TEST_CASE("impact of an unreferenced element is empty") {
    const ResolvedNet net = resolve_source("block A\nblock B");
    std::string error;
    std::optional<ElementRef> element = parse_element_ref(net, "B", error);
    REQUIRE(element);
    const ImpactReport report = impact(net, {}, *element);
    CHECK(report.hits.empty());
}

TEST_CASE("unknown elements are rejected before impact runs") {
    const ResolvedNet net = load_corpus_net();
    std::string error;
    CHECK_FALSE(parse_element_ref(net, "Vehicle.Gearbox", error));
    CHECK_FALSE(error.empty());
    CHECK_FALSE(parse_element_ref(net, "Vehicle -> Vehicle.ACC", error));
}

TEST_CASE("impact on a connector element reports signal use") {
    const ResolvedNet net = load_corpus_net();
    const std::vector<FeatureView> views{load_corpus_view()};
    std::string error;
    std::optional<ElementRef> element = parse_element_ref(
        net, "Vehicle.ACC.DistanceControl -> Vehicle.Brake.BrakeLogic", error);
    REQUIRE(element);
    ImpactReport report = impact(net, views, *element);
    std::set<std::string> reasons;
    for (const ImpactHit& hit : report.hits) {
        reasons.insert(hit.reason);
    }
    CHECK(reasons == std::set<std::string>{"signal-use", "superblock-match"});
}

TEST_CASE("projection implies an impact hit") {
    Rng rng(5001);
    int checked = 0;
    for (int round = 0; round < 40 && checked < 20; ++round) {
        const GeneratedNet gen = random_net(rng);
        const FeatureView view = project_view(rng, gen.net, "P");
        // Pick a directly referenced block.
        const ViewBlock* target = nullptr;
        for (const ViewBlock& b : view.blocks) {
            if (!b.env) {
                target = &b;
                break;
            }
        }
        if (!target) {
            continue;
        }
        RefResolution ref = resolve_ref(gen.net, target->name);
        REQUIRE(ref.id);
        std::string error;
        std::optional<ElementRef> element =
            parse_element_ref(gen.net, gen.net.qualified_path(*ref.id), error);
        REQUIRE(element);
        const std::vector<FeatureView> views{view};
        ImpactReport report = impact(gen.net, views, *element);
        bool found = false;
        for (const ImpactHit& hit : report.hits) {
            if (hit.view == "P") {
                found = true;
            }
        }
        REQUIRE(found);
        ++checked;
    }
    CHECK(checked == 20);
}

TEST_CASE("matrix tabulates blocks_of_view exactly") {
    const ResolvedNet net = load_corpus_net();
    const FeatureView braking = load_corpus_view();
    const FeatureView normal = parse_view(
        "view NormalBrake { block BrakeLogic  block BrakePedalSensor\n"
        "  connect BrakePedalSensor -> BrakeLogic : [pedalPosition] }");
    const FeatureView acc_feature = parse_view(
        "view ACCFeature { block DistanceControl  block BrakeLogic\n"
        "  connect DistanceControl -> BrakeLogic : [decelRequest] }");
    const std::vector<FeatureView> views{braking, normal, acc_feature};

    const FeatureFunctionMatrix m = feature_matrix(net, views);
    REQUIRE(m.rows.size() == 3);
    CHECK(m.rows[0].view == "ACCFeature");
    CHECK(m.rows[1].view == "Braking");
    CHECK(m.rows[2].view == "NormalBrake");
    REQUIRE(m.columns.size() == net.block_count());

    // Shared function: both feature rows set the BrakeLogic column.
    const size_t logic_col = static_cast<size_t>(
        std::find(m.columns.begin(), m.columns.end(), "Vehicle.Brake.BrakeLogic") -
        m.columns.begin());
    CHECK(m.rows[0].cells[logic_col]);
    CHECK(m.rows[2].cells[logic_col]);

    size_t expected_cells = 0;
    for (const FeatureView& v : views) {
        expected_cells += blocks_of_view(net, v).paths.size();
    }
    CHECK(m.set_cell_count() == expected_cells);
}

TEST_CASE("matrix with zero views is header-only") {
    const ResolvedNet net = load_corpus_net();
    const FeatureFunctionMatrix m = feature_matrix(net, {});
    CHECK(m.rows.empty());
    CHECK(m.columns.size() == net.block_count());
    const std::string csv = render_matrix_csv(m);
    CHECK(csv.find("view,Vehicle,") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1);
}

TEST_CASE("inconsistent views are flagged and keep their CC1 bindings") {
    const ResolvedNet net = load_corpus_net();
    const FeatureView broken = parse_view(
        "view Broken { block AutoPilot  block BrakeLogic }");
    const std::vector<FeatureView> views{broken};
    const FeatureFunctionMatrix m = feature_matrix(net, views);
    REQUIRE(m.rows.size() == 1);
    CHECK_FALSE(m.rows[0].consistent);
    const size_t logic_col = static_cast<size_t>(
        std::find(m.columns.begin(), m.columns.end(), "Vehicle.Brake.BrakeLogic") -
        m.columns.begin());
    CHECK(m.rows[0].cells[logic_col]);
    CHECK(render_matrix_csv(m).find("Broken!") != std::string::npos);
}

TEST_CASE("flatten_communication lists every connector as paths") {
    const ResolvedNet net = load_corpus_net();
    const std::vector<FlatLink> links = flatten_communication(net);
    REQUIRE(links.size() == 3);
    CHECK(links[0].source == "Vehicle.ACC.DistanceControl");
    CHECK(links[0].target == "Vehicle.Brake.BrakeLogic");
    CHECK(links[0].signals == std::vector<std::string>{"decelRequest"});
    CHECK(links[1].source == "Vehicle.Brake.BrakeLogic");
    CHECK(links[2].source == "Vehicle.DriverInput.BrakePedalSensor");
}

TEST_CASE("flatten renders port endpoints as path:port") {
    const ResolvedNet net = resolve_source(
        "signal s\nblock A { port out feed }\nblock B\nconnect A.feed -> B : [s]");
    const std::vector<FlatLink> links = flatten_communication(net);
    REQUIRE(links.size() == 1);
    CHECK(links[0].source == "A:feed");
    CHECK(links[0].target == "B");
}

TEST_CASE("flatten count always equals connector count") {
    Rng rng(5002);
    for (int round = 0; round < 20; ++round) {
        const GeneratedNet gen = random_net(rng);
        CHECK(flatten_communication(gen.net).size() == gen.net.connectors().size());
    }
    const ResolvedNet bare = resolve_source("block A");
    CHECK(flatten_communication(bare).empty());
}
