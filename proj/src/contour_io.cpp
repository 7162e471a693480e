#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "shockgraph/contour.hpp"

namespace shock {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
    throw ParseError("line " + std::to_string(line) + ": " + what);
}

void require_finite(Point2 p, int line) {
    if (!is_finite(p)) fail(line, "non-finite coordinate");
}

}  // namespace

Scene parse_scene_text(std::istream& in) {
    Scene scene;
    bool have_header = false;
    ContourFragment* current = nullptr;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::istringstream ls(raw);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "scene") {
            if (!(ls >> scene.width >> scene.height) || scene.width <= 0 || scene.height <= 0)
                fail(line_no, "bad scene header");
            have_header = true;
        } else if (tag == "fragment") {
            if (!have_header) fail(line_no, "fragment before scene header");
            ContourFragment f;
            std::string kind;
            if (!(ls >> f.id >> kind)) fail(line_no, "bad fragment line");
            if (kind == "open") f.closed = false;
            else if (kind == "closed") f.closed = true;
            else fail(line_no, "fragment kind must be open or closed");
            scene.fragments.push_back(std::move(f));
            current = &scene.fragments.back();
        } else if (tag == "v") {
            if (!current) fail(line_no, "vertex outside a fragment");
            Point2 p;
            if (!(ls >> p.x >> p.y)) fail(line_no, "bad vertex");
            require_finite(p, line_no);
            current->vertices.push_back(p);
        } else {
            fail(line_no, "unknown record '" + tag + "'");
        }
    }
    if (!have_header) throw ParseError("missing scene header");
    for (const auto& f : scene.fragments)
        if (f.vertices.size() < 2)
            throw ParseError("fragment " + std::to_string(f.id) + " has fewer than two vertices");
    return scene;
}

Scene parse_scene_json(const std::string& text) {
    Scene scene;
    try {
        const auto j = nlohmann::json::parse(text);
        scene.width = j.at("width").get<double>();
        scene.height = j.at("height").get<double>();
        for (const auto& jf : j.at("fragments")) {
            ContourFragment f;
            f.id = jf.at("id").get<int>();
            f.closed = jf.value("closed", false);
            for (const auto& jv : jf.at("vertices")) {
                Point2 p{jv.at(0).get<double>(), jv.at(1).get<double>()};
                if (!is_finite(p)) throw ParseError("non-finite coordinate");
                f.vertices.push_back(p);
            }
            if (f.vertices.size() < 2)
                throw ParseError("fragment " + std::to_string(f.id) + " has fewer than two vertices");
            scene.fragments.push_back(std::move(f));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("json scene: ") + e.what());
    }
    if (scene.width <= 0 || scene.height <= 0) throw ParseError("json scene: non-positive size");
    return scene;
}

void write_scene_text(std::ostream& out, const Scene& scene) {
    out.precision(17);
    out << "scene " << scene.width << ' ' << scene.height << '\n';
    for (const auto& f : scene.fragments) {
        out << "fragment " << f.id << ' ' << (f.closed ? "closed" : "open") << '\n';
        for (const Point2& p : f.vertices) out << "v " << p.x << ' ' << p.y << '\n';
    }
}

BinaryMask read_pbm(std::istream& in) {
    auto next_token = [&in]() {
        std::string tok;
        char c;
        while (in.get(c)) {
            if (c == '#') {
                std::string rest;
                std::getline(in, rest);
                if (!tok.empty()) break;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (!tok.empty()) break;
                continue;
            }
            tok.push_back(c);
        }
        return tok;
    };
    const std::string magic = next_token();
    if (magic != "P1" && magic != "P4") throw ParseError("pbm: unsupported magic '" + magic + "'");
    BinaryMask mask;
    try {
        mask.width = std::stoi(next_token());
        mask.height = std::stoi(next_token());
    } catch (const std::exception&) {
        throw ParseError("pbm: bad dimensions");
    }
    if (mask.width <= 0 || mask.height <= 0) throw ParseError("pbm: bad dimensions");
    mask.bits.assign(static_cast<std::size_t>(mask.width) * mask.height, 0);
    if (magic == "P1") {
        std::size_t i = 0;
        char c;
        while (i < mask.bits.size() && in.get(c)) {
            if (c == '#') {
                std::string rest;
                std::getline(in, rest);
            } else if (c == '0' || c == '1') {
                mask.bits[i++] = static_cast<std::uint8_t>(c == '1');
            } else if (!std::isspace(static_cast<unsigned char>(c))) {
                throw ParseError("pbm: bad pixel character");
            }
        }
        if (i != mask.bits.size()) throw ParseError("pbm: truncated raster");
    } else {
        const std::size_t row_bytes = (static_cast<std::size_t>(mask.width) + 7) / 8;
        std::vector<char> row(row_bytes);
        for (int r = 0; r < mask.height; ++r) {
            if (!in.read(row.data(), static_cast<std::streamsize>(row_bytes)))
                throw ParseError("pbm: truncated raster");
            for (int c = 0; c < mask.width; ++c) {
                const auto byte = static_cast<unsigned char>(row[c / 8]);
                mask.bits[static_cast<std::size_t>(r) * mask.width + c] = (byte >> (7 - c % 8)) & 1;
            }
        }
    }
    return mask;
}

Scene load_scene(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    const std::string ext = path.extension().string();
    try {
        if (ext == ".pbm") {
            const BinaryMask mask = read_pbm(in);
            Scene scene;
            scene.width = mask.width;
            scene.height = mask.height;
            scene.fragments = trace_binary_mask(mask);
            return scene;
        }
        if (ext == ".json") {
            std::stringstream buf;
            buf << in.rdbuf();
            return parse_scene_json(buf.str());
        }
        return parse_scene_text(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace shock
