#include "hsob/serialize.hpp"

#include "json.hpp"

namespace hsob {

namespace {

using nlohmann::json;

Point to_point(const json& j) {
    require(j.is_array() && !j.empty() && j.size() <= 3, ErrorKind::config, "points need 1 to 3 coordinates");
    Point p{};
    for (std::size_t a = 0; a < j.size(); ++a) p[a] = j[a].get<double>();
    return p;
}

json from_point(const Point& p, int dim) { return json(std::vector<double>(p.begin(), p.begin() + dim)); }

BoundingBox to_bbox(const json& j) {
    require(j.contains("lo") && j.contains("hi"), ErrorKind::config, "bbox needs lo and hi");
    BoundingBox b{to_point(j["lo"]), to_point(j["hi"]), static_cast<int>(j["lo"].size())};
    require(j["hi"].size() == j["lo"].size(), ErrorKind::config, "bbox lo and hi differ in dimension");
    return b;
}

DomainShape parse(const json& j) {
    require(j.is_object() && j.contains("kind") && j.contains("bbox"), ErrorKind::config, "domain needs kind and bbox");
    const std::string kind = j["kind"].get<std::string>();
    const BoundingBox bb = to_bbox(j["bbox"]);
    if (kind == "rectangle") return DomainShape::rectangle(to_point(j.at("lo")), to_point(j.at("hi")), bb.dim, bb);
    if (kind == "polygon") {
        std::vector<Point> v;
        for (const auto& p : j.at("vertices")) v.push_back(to_point(p));
        return DomainShape::polygon(std::move(v), bb);
    }
    if (kind == "disk") {
        return DomainShape::disk(to_point(j.at("center")), j.at("radius").get<double>(), j.at("sides").get<int>(), bb);
    }
    if (kind == "graph") {
        return DomainShape::graph(j.at("y0").get<double>(), j.at("y1").get<double>(),
                                  j.at("samples").get<std::vector<double>>(), j.at("lipschitz").get<double>(), bb);
    }
    if (kind == "complement") return DomainShape::complement(parse(j.at("inner")), bb);
    fail(ErrorKind::config, "unknown domain kind '" + kind + "'");
}

json dump(const DomainShape& d) {
    const int n = d.dim();
    json j;
    j["kind"] = to_string(d.kind());
    j["bbox"] = {{"lo", from_point(d.bbox().lo, n)}, {"hi", from_point(d.bbox().hi, n)}};
    switch (d.kind()) {
        case DomainKind::rectangle:
            j["lo"] = from_point(d.rect_lo(), n);
            j["hi"] = from_point(d.rect_hi(), n);
            break;
        case DomainKind::polygon:
            j["vertices"] = json::array();
            for (const Point& v : d.vertices()) j["vertices"].push_back(from_point(v, 2));
            break;
        case DomainKind::graph:
            j["y0"] = d.graph_y0();
            j["y1"] = d.graph_y1();
            j["samples"] = d.samples();
            j["lipschitz"] = d.lipschitz();
            break;
        case DomainKind::complement:
            j["inner"] = dump(*d.inner());
            break;
    }
    return j;
}

json balls(const std::vector<Ball>& v) {
    json a = json::array();
    for (const Ball& b : v) a.push_back({{"center", b.center}, {"radius", b.radius}});
    return a;
}

}  // namespace

DomainShape domain_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
        return parse(j);
    } catch (const json::exception& e) {
        fail(ErrorKind::config, std::string("domain document: ") + e.what());
    }
}

std::string domain_json(const DomainShape& domain) { return dump(domain).dump(2); }

std::string cover_json(const BallCover& cover) {
    json j;
    j["role"] = to_string(cover.role);
    j["overlap_bound"] = cover.overlap_bound;
    j["balls"] = balls(cover.balls);
    return j.dump(2);
}

std::string chain_json(const ChainOfBalls& chain) {
    json j;
    j["x"] = chain.x;
    j["y"] = chain.y;
    j["length_constant"] = chain.length_constant;
    j["truncation_radius"] = chain.truncation_radius;
    j["balls"] = balls(chain.balls);
    j["path"] = chain.path;
    return j.dump(2);
}

}  // namespace hsob
