#include "shockgraph/serialize.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace shock {

namespace {

void put(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void put(std::string& out, int v) { out += std::to_string(v); }

double to_double(const std::string& tok, int line) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || *end != '\0' || errno == ERANGE)
        throw ParseError("line " + std::to_string(line) + ": bad number '" + tok + "'");
    return v;
}

int to_int(const std::string& tok, int line) {
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (tok.empty() || *end != '\0') throw ParseError("line " + std::to_string(line) + ": bad integer '" + tok + "'");
    return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string t; in >> t;) out.push_back(t);
    return out;
}

}  // namespace

GraphRecord make_record(const ShockGraph& graph, double lambda, double bbox_scale) {
    GraphRecord rec;
    rec.width = graph.width;
    rec.height = graph.height;
    rec.lambda = lambda;
    rec.bbox_scale = bbox_scale;
    for (const auto& n : graph.nodes) {
        GraphRecord::Node r;
        r.id = n.id;
        r.label = label_code(n.label);
        r.x = n.location.x;
        r.y = n.location.y;
        r.r = n.radius;
        r.features = node_features(n, graph).values;
        rec.nodes.push_back(r);
    }
    for (const auto& l : graph.links) {
        GraphRecord::Link r;
        r.id = l.id;
        r.from = l.from;
        r.to = l.to;
        r.label = label_code(l.label);
        const auto e = edge_features(l).values;
        r.metrics = {e[0], e[1], e[2], e[4], e[5], e[6], e[7]};
        const auto pts = l.samples(kLinkSamples);
        std::copy(pts.begin(), pts.end(), r.samples.begin());
        rec.links.push_back(r);
    }
    return rec;
}

// --- sgtext -----------------------------------------------------------------

std::string to_sgtext(const GraphRecord& rec) {
    std::string out = "shockgraph v1 ";
    put(out, rec.width);
    out += ' ';
    put(out, rec.height);
    out += ' ';
    put(out, rec.lambda);
    out += ' ';
    put(out, rec.bbox_scale);
    out += "\n# layout_version 1\n";
    out += "# node_label source=0 sink=1 junction=2\n";
    out += "# link_label degenerate=0 semi-degenerate=1 regular=2\n";
    out += "# n id label x y r f0..f57\n";
    out += "# e id from to label s kappa area sB+ kB+ sB- kB-, then 16 g x y samples\n";
    for (const auto& n : rec.nodes) {
        out += "n ";
        put(out, n.id);
        out += ' ';
        put(out, n.label);
        for (double v : {n.x, n.y, n.r}) {
            out += ' ';
            put(out, v);
        }
        for (double v : n.features) {
            out += ' ';
            put(out, v);
        }
        out += '\n';
    }
    for (const auto& l : rec.links) {
        out += "e ";
        for (int v : {l.id, l.from, l.to, l.label}) {
            put(out, v);
            out += ' ';
        }
        for (std::size_t i = 0; i < l.metrics.size(); ++i) {
            if (i) out += ' ';
            put(out, l.metrics[i]);
        }
        out += '\n';
        for (const auto& p : l.samples) {
            out += "g ";
            put(out, p.x);
            out += ' ';
            put(out, p.y);
            out += '\n';
        }
    }
    return out;
}

GraphRecord parse_sgtext(const std::string& text) {
    GraphRecord rec;
    std::istringstream in(text);
    std::string line;
    int no = 0;
    bool header = false;
    int pending_samples = 0;
    while (std::getline(in, line)) {
        ++no;
        if (line.empty() || line[0] == '#') continue;
        const auto tok = split(line);
        if (!header) {
            if (tok.size() != 6 || tok[0] != "shockgraph" || tok[1] != "v1")
                throw ParseError("line " + std::to_string(no) + ": expected 'shockgraph v1' header");
            rec.width = to_double(tok[2], no);
            rec.height = to_double(tok[3], no);
            rec.lambda = to_double(tok[4], no);
            rec.bbox_scale = to_double(tok[5], no);
            header = true;
            continue;
        }
        if (tok[0] == "g") {
            if (pending_samples == 0 || tok.size() != 3)
                throw ParseError("line " + std::to_string(no) + ": unexpected sample line");
            auto& l = rec.links.back();
            l.samples[kLinkSamples - pending_samples] = {to_double(tok[1], no), to_double(tok[2], no)};
            --pending_samples;
            continue;
        }
        if (pending_samples != 0) throw ParseError("line " + std::to_string(no) + ": link has too few samples");
        if (tok[0] == "n") {
            if (tok.size() != 6 + kNodeFeatureLength)
                throw ParseError("line " + std::to_string(no) + ": node line needs " +
                                 std::to_string(6 + kNodeFeatureLength) + " fields");
            GraphRecord::Node n;
            n.id = to_int(tok[1], no);
            n.label = to_int(tok[2], no);
            n.x = to_double(tok[3], no);
            n.y = to_double(tok[4], no);
            n.r = to_double(tok[5], no);
            for (int i = 0; i < kNodeFeatureLength; ++i) n.features[i] = to_double(tok[6 + i], no);
            rec.nodes.push_back(n);
        } else if (tok[0] == "e") {
            if (tok.size() != 12) throw ParseError("line " + std::to_string(no) + ": link line needs 12 fields");
            GraphRecord::Link l;
            l.id = to_int(tok[1], no);
            l.from = to_int(tok[2], no);
            l.to = to_int(tok[3], no);
            l.label = to_int(tok[4], no);
            for (int i = 0; i < 7; ++i) l.metrics[i] = to_double(tok[5 + i], no);
            rec.links.push_back(l);
            pending_samples = kLinkSamples;
        } else {
            throw ParseError("line " + std::to_string(no) + ": unknown record '" + tok[0] + "'");
        }
    }
    if (!header) throw ParseError("missing 'shockgraph v1' header");
    if (pending_samples != 0) throw ParseError("last link has too few samples");
    return rec;
}

// --- GraphML ----------------------------------------------------------------

namespace {

std::string joined(const double* v, std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) s += ' ';
        put(s, v[i]);
    }
    return s;
}

void data(std::string& out, const char* key, const std::string& value) {
    out += "      <data key=\"";
    out += key;
    out += "\">";
    out += value;
    out += "</data>\n";
}

std::string num(double v) {
    std::string s;
    put(s, v);
    return s;
}

// Minimal reader for the fixed structure to_graphml emits.
class GraphmlReader {
public:
    explicit GraphmlReader(const std::string& t) : text_(t) {}

    bool next_element(const char* name, std::size_t& pos, std::string& body, std::string& open_tag) const {
        const std::string open = std::string("<") + name + " ";
        const std::size_t a = text_.find(open, pos);
        if (a == std::string::npos) return false;
        const std::size_t tag_end = text_.find('>', a);
        if (tag_end == std::string::npos) throw ParseError(std::string("unterminated <") + name + ">");
        open_tag = text_.substr(a, tag_end - a + 1);
        const std::string close = std::string("</") + name + ">";
        const std::size_t b = text_.find(close, tag_end);
        if (b == std::string::npos) throw ParseError(std::string("missing ") + close);
        body = text_.substr(tag_end + 1, b - tag_end - 1);
        pos = b + close.size();
        return true;
    }

    static std::string attr(const std::string& tag, const std::string& name) {
        const std::string key = " " + name + "=\"";
        const std::size_t a = tag.find(key);
        if (a == std::string::npos) throw ParseError("missing attribute " + name);
        const std::size_t b = tag.find('"', a + key.size());
        return tag.substr(a + key.size(), b - a - key.size());
    }

    static std::string data(const std::string& body, const std::string& key) {
        const std::string open = "<data key=\"" + key + "\">";
        const std::size_t a = body.find(open);
        if (a == std::string::npos) throw ParseError("missing data " + key);
        const std::size_t b = body.find("</data>", a);
        return body.substr(a + open.size(), b - a - open.size());
    }

private:
    const std::string& text_;
};

std::vector<double> numbers(const std::string& s) {
    std::vector<double> out;
    for (const auto& t : split(s)) out.push_back(to_double(t, 0));
    return out;
}

int strip_prefix_id(const std::string& s) {
    if (s.size() < 2) throw ParseError("bad element id '" + s + "'");
    return to_int(s.substr(1), 0);
}

}  // namespace

std::string to_graphml(const GraphRecord& rec) {
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
           "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
           "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
           "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n";
    const char* keys[][4] = {
        {"width", "graph", "width", "double"},       {"height", "graph", "height", "double"},
        {"lambda", "graph", "lambda", "double"},     {"bbox_scale", "graph", "bbox_scale", "double"},
        {"layout", "graph", "layout_version", "int"}, {"nlabel", "node", "label", "int"},
        {"x", "node", "x", "double"},                {"y", "node", "y", "double"},
        {"r", "node", "r", "double"},                {"nfeat", "node", "features", "string"},
        {"elabel", "edge", "label", "int"},          {"efeat", "edge", "features", "string"},
        {"geom", "edge", "geometry", "string"},
    };
    for (const auto& k : keys) {
        out += "  <key id=\"";
        out += k[0];
        out += "\" for=\"";
        out += k[1];
        out += "\" attr.name=\"";
        out += k[2];
        out += "\" attr.type=\"";
        out += k[3];
        out += "\"/>\n";
    }
    out += "  <graph id=\"G\" edgedefault=\"directed\">\n";
    out += "    <data key=\"width\">" + num(rec.width) + "</data>\n";
    out += "    <data key=\"height\">" + num(rec.height) + "</data>\n";
    out += "    <data key=\"lambda\">" + num(rec.lambda) + "</data>\n";
    out += "    <data key=\"bbox_scale\">" + num(rec.bbox_scale) + "</data>\n";
    out += "    <data key=\"layout\">" + std::to_string(kLayoutVersion) + "</data>\n";
    for (const auto& n : rec.nodes) {
        out += "    <node id=\"n" + std::to_string(n.id) + "\">\n";
        data(out, "nlabel", std::to_string(n.label));
        data(out, "x", num(n.x));
        data(out, "y", num(n.y));
        data(out, "r", num(n.r));
        data(out, "nfeat", joined(n.features.data(), n.features.size()));
        out += "    </node>\n";
    }
    for (const auto& l : rec.links) {
        out += "    <edge id=\"e" + std::to_string(l.id) + "\" source=\"n" + std::to_string(l.from) + "\" target=\"n" +
               std::to_string(l.to) + "\">\n";
        data(out, "elabel", std::to_string(l.label));
        const auto& m = l.metrics;
        const double feat[8] = {m[0], m[1], m[2], static_cast<double>(l.label), m[3], m[4], m[5], m[6]};
        data(out, "efeat", joined(feat, 8));
        std::vector<double> g;
        for (const auto& p : l.samples) {
            g.push_back(p.x);
            g.push_back(p.y);
        }
        data(out, "geom", joined(g.data(), g.size()));
        out += "    </edge>\n";
    }
    out += "  </graph>\n</graphml>\n";
    return out;
}

GraphRecord parse_graphml(const std::string& text) {
    GraphRecord rec;
    GraphmlReader rd(text);
    std::size_t pos = 0;
    std::string body, tag;
    if (!rd.next_element("graph", pos, body, tag)) throw ParseError("no <graph> element");
    if (GraphmlReader::attr(tag, "edgedefault") != "directed") throw ParseError("graph is not directed");
    rec.width = to_double(GraphmlReader::data(body, "width"), 0);
    rec.height = to_double(GraphmlReader::data(body, "height"), 0);
    rec.lambda = to_double(GraphmlReader::data(body, "lambda"), 0);
    rec.bbox_scale = to_double(GraphmlReader::data(body, "bbox_scale"), 0);

    GraphmlReader inner(body);
    std::size_t p = 0;
    std::string nb, nt;
    while (inner.next_element("node", p, nb, nt)) {
        GraphRecord::Node n;
        n.id = strip_prefix_id(GraphmlReader::attr(nt, "id"));
        n.label = to_int(GraphmlReader::data(nb, "nlabel"), 0);
        n.x = to_double(GraphmlReader::data(nb, "x"), 0);
        n.y = to_double(GraphmlReader::data(nb, "y"), 0);
        n.r = to_double(GraphmlReader::data(nb, "r"), 0);
        const auto f = numbers(GraphmlReader::data(nb, "nfeat"));
        if (f.size() != kNodeFeatureLength) throw ParseError("node feature vector has wrong length");
        std::copy(f.begin(), f.end(), n.features.begin());
        rec.nodes.push_back(n);
    }
    p = 0;
    while (inner.next_element("edge", p, nb, nt)) {
        GraphRecord::Link l;
        l.id = strip_prefix_id(GraphmlReader::attr(nt, "id"));
        l.from = strip_prefix_id(GraphmlReader::attr(nt, "source"));
        l.to = strip_prefix_id(GraphmlReader::attr(nt, "target"));
        l.label = to_int(GraphmlReader::data(nb, "elabel"), 0);
        const auto f = numbers(GraphmlReader::data(nb, "efeat"));
        if (f.size() != kEdgeFeatureLength) throw ParseError("edge feature vector has wrong length");
        l.metrics = {f[0], f[1], f[2], f[4], f[5], f[6], f[7]};
        const auto g = numbers(GraphmlReader::data(nb, "geom"));
        if (g.size() != 2 * kLinkSamples) throw ParseError("edge geometry has wrong length");
        for (int i = 0; i < kLinkSamples; ++i) l.samples[i] = {g[2 * i], g[2 * i + 1]};
        rec.links.push_back(l);
    }
    return rec;
}

// --- SVG --------------------------------------------------------------------

std::string to_svg(const ShockGraph& graph, const std::vector<ShockLink>* pruned) {
    Rect view = graph.box;
    for (const auto& e : graph.elements) {
        view.min.x = std::min({view.min.x, e.a.x, e.b.x});
        view.min.y = std::min({view.min.y, e.a.y, e.b.y});
        view.max.x = std::max({view.max.x, e.a.x, e.b.x});
        view.max.y = std::max({view.max.y, e.a.y, e.b.y});
    }
    const double stroke = std::max(view.width(), view.height()) / 600.0;
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + num(view.min.x) + " " + num(view.min.y) + " " +
           num(view.width()) + " " + num(view.height()) + "\" width=\"" + num(std::ceil(view.width())) +
           "\" height=\"" + num(std::ceil(view.height())) + "\">\n";
    out += "<rect x=\"" + num(view.min.x) + "\" y=\"" + num(view.min.y) + "\" width=\"" + num(view.width()) +
           "\" height=\"" + num(view.height()) + "\" fill=\"#FFFFFF\"/>\n";

    auto polyline = [&](const std::vector<Point2>& pts, const char* color, const char* cls) {
        out += "<polyline class=\"";
        out += cls;
        out += "\" fill=\"none\" stroke=\"";
        out += color;
        out += "\" stroke-width=\"" + num(stroke) + "\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) out += ' ';
            out += num(pts[i].x) + "," + num(pts[i].y);
        }
        out += "\"/>\n";
    };

    for (const auto& e : graph.elements) {
        if (!e.is_segment()) continue;
        polyline({e.a, e.b}, graph.is_box_element(e.id) ? "#FF00FF" : "#FF0000",
                 graph.is_box_element(e.id) ? "box" : "contour");
    }
    if (pruned)
        for (const auto& l : *pruned) polyline(l.samples(32), "#808080", "pruned");
    for (const auto& l : graph.links) polyline(l.samples(32), "#00FF00", "shock");
    for (const auto& n : graph.nodes) {
        if (!n.links.empty()) continue;
        out += "<circle class=\"shock\" cx=\"" + num(n.location.x) + "\" cy=\"" + num(n.location.y) + "\" r=\"" +
               num(2 * stroke) + "\" fill=\"#00FF00\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw WriteError("cannot open " + tmp.string() + " for writing: " + std::strerror(errno));
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        f.flush();
        if (!f) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw WriteError("write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw WriteError("cannot move output into place at " + path.string() + ": " + ec.message());
    }
}

}  // namespace shock
