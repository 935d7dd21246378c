#include "mmsph/scenes.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace mmsph {

void CaseConfig::validate() const {
    if (!(delta_p > 0.0)) throw std::invalid_argument("config: delta_p must be positive");
    if (!(h > 0.0)) throw std::invalid_argument("config: h must be positive");
    const double ratio = h / delta_p;
    if (ratio < 1.0 || ratio > 2.5)
        throw std::invalid_argument("config: h/delta_p must lie in [1.0, 2.5]");
    if (dim != 2 && dim != 3) throw std::invalid_argument("config: dim must be 2 or 3");
    if (kind == CaseKind::taylor) {
        if (!(cyl_length > delta_p) || !(cyl_diameter > delta_p))
            throw std::invalid_argument("config: cylinder dimensions must exceed delta_p");
    } else {
        if (!(box_extents.x > 0.0) || !(box_extents.y > 0.0))
            throw std::invalid_argument("config: box extents must be positive");
        if (dim == 3 && !(box_extents.z > 0.0))
            throw std::invalid_argument("config: box z extent must be positive in 3D");
    }
    if (!step.use_cfl && !(step.dt > 0.0))
        throw std::invalid_argument("config: step.dt must be positive (or enable CFL)");
    if (step.use_cfl && !(step.cfl > 0.0 && step.cfl <= 1.0))
        throw std::invalid_argument("config: step.cfl must lie in (0, 1]");
    if (!(step.t_end > 0.0)) throw std::invalid_argument("config: step.t_end must be positive");
    if (has_tool && !(contact_params.radius > 0.0))
        throw std::invalid_argument("config: contact.radius must be positive");
}

Lattice generate_box_lattice(const Vec3& extents, double dp, int dim, LatticeMode mode,
                             const Vec3& origin) {
    if (!(dp > 0.0)) throw std::invalid_argument("generate_box_lattice: dp must be positive");
    auto cells = [dp](double e) { return std::max(1, static_cast<int>(std::lround(e / dp))); };
    const int ncx = cells(extents.x);
    const int ncy = cells(extents.y);
    const int ncz = dim == 3 ? cells(extents.z) : 1;
    for (double e : {extents.x, extents.y, dim == 3 ? extents.z : dp}) {
        const double r = e / dp;
        if (std::abs(r - std::lround(r)) > 0.1)
            std::cerr << "generate_box_lattice: extent " << e
                      << " is not a multiple of dp, rounding\n";
    }

    Lattice lat;
    lat.volume = dim == 3 ? dp * dp * dp : dp * dp;
    const bool node = mode == LatticeMode::node;
    const int nx = node ? ncx + 1 : ncx;
    const int ny = node ? ncy + 1 : ncy;
    const int nz = dim == 3 ? (node ? ncz + 1 : ncz) : 1;
    const double off = node ? 0.0 : 0.5 * dp;
    lat.positions.reserve(static_cast<std::size_t>(nx) * ny * nz);
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                lat.positions.push_back({origin.x + off + i * dp,
                                         origin.y + off + j * dp,
                                         dim == 3 ? origin.z + off + k * dp : 0.0});
    if (lat.positions.empty())
        throw std::invalid_argument("generate_box_lattice: zero particles");
    return lat;
}

Lattice generate_cylinder_lattice(double length, double diameter, double dp) {
    if (!(diameter > dp))
        throw std::invalid_argument("generate_cylinder_lattice: diameter must exceed dp");
    if (!(length > dp))
        throw std::invalid_argument("generate_cylinder_lattice: length must exceed dp");
    Lattice lat;
    lat.volume = dp * dp * dp;
    const double r = 0.5 * diameter;
    const int nr = static_cast<int>(std::ceil(r / dp));
    const int nz = std::max(1, static_cast<int>(std::lround(length / dp)));
    for (int k = 0; k < nz; ++k) {
        const double z = (k + 0.5) * dp;
        // symmetric about the axis: offsets at (i + 0.5) dp on both sides
        for (int j = -nr; j < nr; ++j) {
            const double y = (j + 0.5) * dp;
            for (int i = -nr; i < nr; ++i) {
                const double x = (i + 0.5) * dp;
                if (x * x + y * y <= r * r) lat.positions.push_back({x, y, z});
            }
        }
    }
    if (lat.positions.empty())
        throw std::invalid_argument("generate_cylinder_lattice: zero particles");
    return lat;
}

namespace {

void append_body(ParticleSystem& ps, const Lattice& lat, const MaterialParams& mat,
                 const Vec3& velocity, Body body) {
    const std::size_t old = ps.size();
    ps.resize(old + lat.positions.size());
    for (std::size_t k = 0; k < lat.positions.size(); ++k) {
        const std::size_t i = old + k;
        ps.x[i] = lat.positions[k];
        ps.v[i] = velocity;
        ps.mass[i] = mat.rho0 * lat.volume;
        ps.rho[i] = mat.rho0;
        ps.T[i] = mat.T_ref;
        ps.body[i] = static_cast<std::uint8_t>(body);
    }
}

void flag_fixed(ParticleSystem& ps, const CaseConfig& cfg) {
    if (cfg.fixed_faces.empty()) return;
    Vec3 lo = ps.x[0], hi = ps.x[0];
    for (std::size_t i = 0; i < ps.tool_begin; ++i) {
        lo.x = std::min(lo.x, ps.x[i].x); hi.x = std::max(hi.x, ps.x[i].x);
        lo.y = std::min(lo.y, ps.x[i].y); hi.y = std::max(hi.y, ps.x[i].y);
        lo.z = std::min(lo.z, ps.x[i].z); hi.z = std::max(hi.z, ps.x[i].z);
    }
    const double band = (cfg.fixed_layers - 0.5) * cfg.delta_p + 0.25 * cfg.delta_p;
    for (const std::string& face : cfg.fixed_faces) {
        for (std::size_t i = 0; i < ps.tool_begin; ++i) {
            const Vec3& p = ps.x[i];
            bool hit = false;
            if (face == "x_min") hit = p.x <= lo.x + band;
            else if (face == "x_max") hit = p.x >= hi.x - band;
            else if (face == "y_min") hit = p.y <= lo.y + band;
            else if (face == "y_max") hit = p.y >= hi.y - band;
            else if (face == "z_min") hit = p.z <= lo.z + band;
            else if (face == "z_max") hit = p.z >= hi.z - band;
            else throw std::invalid_argument("config: unknown fixed face '" + face + "'");
            if (hit) ps.fixed[i] = 1;
        }
    }
}

}  // namespace

SimulationSetup build_case(const CaseConfig& config) {
    CaseConfig cfg = config;
    cfg.material.finalize();
    if (cfg.esph_params.delta_p <= 0.0) cfg.esph_params.delta_p = cfg.delta_p;
    if (cfg.contact_params.radius <= 0.0) cfg.contact_params.radius = 0.5 * cfg.delta_p;
    cfg.validate();

    SimulationSetup setup;
    setup.config = cfg;
    ParticleSystem& ps = setup.ps;
    ps.dim = cfg.dim;
    const MaterialParams& mat = cfg.material;

    if (cfg.kind == CaseKind::taylor) {
        const Lattice lat = generate_cylinder_lattice(cfg.cyl_length, cfg.cyl_diameter,
                                                      cfg.delta_p);
        append_body(ps, lat, mat, cfg.initial_velocity, Body::workpiece);
        ps.tool_begin = ps.size();
    } else if (cfg.kind == CaseKind::pressing) {
        const Lattice work = generate_box_lattice(cfg.box_extents, cfg.delta_p, 3, cfg.lattice);
        append_body(ps, work, mat, {}, Body::workpiece);
        ps.tool_begin = ps.size();
        if (cfg.has_tool) {
            // tool presses from the free right side toward the fixed left face,
            // centred on the workpiece in y and aligned in z
            const Vec3 tool_origin{cfg.box_extents.x + cfg.delta_p,
                                   0.5 * (cfg.box_extents.y - cfg.tool_extents.y),
                                   0.0};
            const Lattice tool = generate_box_lattice(cfg.tool_extents, cfg.delta_p, 3,
                                                      cfg.lattice, tool_origin);
            append_body(ps, tool, mat, cfg.tool_velocity, Body::tool);
        }
    } else {  // cutting, 2D plane strain
        const Lattice work = generate_box_lattice(cfg.box_extents, cfg.delta_p, 2, cfg.lattice);
        append_body(ps, work, mat, {}, Body::workpiece);
        ps.tool_begin = ps.size();
        if (cfg.has_tool) {
            // tool lower edge sits `feed` below the workpiece top surface,
            // one particle spacing off the right face
            const Vec3 tool_origin{cfg.box_extents.x, cfg.box_extents.y - cfg.feed, 0.0};
            const Lattice tool = generate_box_lattice(cfg.tool_extents, cfg.delta_p, 2,
                                                      cfg.lattice, tool_origin);
            append_body(ps, tool, mat, cfg.tool_velocity, Body::tool);
        }
    }

    flag_fixed(ps, cfg);
    setup.tool.velocity = cfg.tool_velocity;
    setup.tool.radius = cfg.contact_params.radius > 0.0 ? cfg.contact_params.radius
                                                        : 0.5 * cfg.delta_p;

    // reject configurations where the tool already penetrates the workpiece
    if (ps.tool_begin < ps.size()) {
        Vec3 lo = ps.x[0], hi = ps.x[0];
        for (std::size_t i = 0; i < ps.tool_begin; ++i) {
            lo.x = std::min(lo.x, ps.x[i].x); hi.x = std::max(hi.x, ps.x[i].x);
            lo.y = std::min(lo.y, ps.x[i].y); hi.y = std::max(hi.y, ps.x[i].y);
            lo.z = std::min(lo.z, ps.x[i].z); hi.z = std::max(hi.z, ps.x[i].z);
        }
        const double dp = cfg.delta_p;
        for (std::size_t i = ps.tool_begin; i < ps.size(); ++i) {
            const Vec3& p = ps.x[i];
            if (p.x > lo.x + dp && p.x < hi.x - dp && p.y > lo.y + dp && p.y < hi.y - dp &&
                (cfg.dim == 2 || (p.z > lo.z + dp && p.z < hi.z - dp)))
                throw std::invalid_argument("build_case: tool overlaps workpiece at t=0");
        }
    }
    return setup;
}

std::vector<std::string> preset_names() {
    return {"taylor", "pressing", "cutting-f03", "cutting-f05"};
}

namespace {

MaterialParams steel_4340_low_strength() {
    MaterialParams m;
    m.rho0 = 7830.0;
    m.mu = 82.9e9;
    m.K = 169.1e9;
    m.A = 792e6;
    m.B = 510e6;
    m.n_hard = 0.26;
    m.C_rate = 0.014;
    m.m_therm = 1.03;
    m.T_ref = 293.0;
    m.T_melt = 1293.0;
    m.C_p = 460.0;
    m.chi = 0.9;
    return m;
}

MaterialParams steel_aisi4340() {
    MaterialParams m;
    m.rho0 = 7830.0;
    m.E = 207e9;
    m.nu = 0.3;
    m.A = 792e6;
    m.B = 510e6;
    m.n_hard = 0.26;
    m.C_rate = 0.014;
    m.m_therm = 1.03;
    m.T_ref = 298.0;
    m.T_melt = 1573.0;
    m.C_p = 480.0;
    m.chi = 0.9;
    return m;
}

CaseConfig cutting_base(double feed) {
    CaseConfig c;
    c.kind = CaseKind::cutting;
    c.dim = 2;
    c.box_extents = {3e-3, 1e-3, 0.0};
    c.delta_p = 0.01e-3;
    c.h = 0.018e-3;
    c.material = steel_aisi4340();
    c.has_tool = true;
    c.tool_extents = {0.5e-3, 1e-3, 0.0};
    c.tool_velocity = {-50.0, 0.0, 0.0};
    c.feed = feed;
    c.fixed_faces = {"y_min"};
    c.fixed_layers = 2;
    c.esph_params = {.beta1 = 0.5, .beta2 = 0.5, .gamma_ap = 0.3, .delta_p = c.delta_p};
    c.contact_params.radius = 0.5 * c.delta_p;
    c.contact_params.k_p = 1e5;
    c.step.dt = 1e-10;
    c.step.t_end = 20e-6;  // 1 mm of cut at 50 m/s
    return c;
}

}  // namespace

CaseConfig preset(const std::string& name) {
    if (name == "taylor") {
        CaseConfig c;
        c.name = name;
        c.kind = CaseKind::taylor;
        c.dim = 3;
        c.cyl_length = 37.97e-3;
        c.cyl_diameter = 7.595e-3;
        c.delta_p = 0.5e-3;
        c.h = 0.75e-3;
        c.material = steel_4340_low_strength();
        c.initial_velocity = {0.0, 0.0, -181.0};
        c.has_wall = true;
        c.wall_z = 0.0;
        c.esph_params = {.beta1 = 1.5, .beta2 = 1.5, .gamma_ap = 0.3, .delta_p = c.delta_p};
        c.contact_params.radius = 0.5 * c.delta_p;
        c.step.dt = 1e-8;
        c.step.t_end = 70e-6;
        return c;
    }
    if (name == "pressing") {
        CaseConfig c;
        c.name = name;
        c.kind = CaseKind::pressing;
        c.dim = 3;
        c.box_extents = {1e-3, 0.5e-3, 0.1e-3};
        c.delta_p = 0.00667e-3;
        c.h = 0.01e-3;
        c.lattice = LatticeMode::node;
        c.material = steel_aisi4340();
        c.has_tool = true;
        c.tool_extents = {0.1e-3, 0.7e-3, 0.1e-3};
        c.tool_velocity = {-200.0, 0.0, 0.0};
        c.fixed_faces = {"x_min"};
        c.esph_params = {.beta1 = 0.5, .beta2 = 0.5, .gamma_ap = 0.3, .delta_p = c.delta_p};
        c.contact_params.radius = 0.5 * c.delta_p;
        c.contact_params.k_p = 4.0;
        c.step.dt = 1e-10;
        c.step.t_end = 1.5e-6;  // 0.3 mm of press at 200 m/s
        return c;
    }
    if (name == "cutting-f03") {
        CaseConfig c = cutting_base(0.3e-3);
        c.name = name;
        return c;
    }
    if (name == "cutting-f05") {
        CaseConfig c = cutting_base(0.5e-3);
        c.name = name;
        return c;
    }
    throw std::invalid_argument("unknown preset '" + name + "'");
}

}  // namespace mmsph
