//! Subcommands of the `grassnet` binary.
//!
//! Every command returns an [`Outcome`]: an optional data file (net, field or
//! mesh), a list of `key=value` report lines and a pass flag. The binary
//! writes the data to `--out` (or stdout) and the report to stdout, or to
//! stderr when the data already occupy stdout.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use grassnet::coefficients::{extract_a_field, lame_from_a, qnet_rotation_coeffs};
use grassnet::darboux::{check_map_4d_consistency, evolve_with, random_state, DarbouxState, EvolveOptions};
use grassnet::darboux_net::{
    edge_net_rotation_coeffs, extract_r_field, potentials_s, random_slicing_plane, slice_qnet,
};
use grassnet::io::{self, Field};
use grassnet::lattice::parse_extents;
use grassnet::mesh::export_obj;
use grassnet::qnet::{
    check_4d_consistency, propagate_net_with, random_generic_hypercube_data, random_walls, AxisChoice,
    FillOrder, HypercubeData, PropagateOptions, SquareCheck,
};
use grassnet::{join, EdgeNet, Error, Execution, QNet, Region, Sampler, VertexIndex};

#[derive(Parser, Debug)]
#[command(name = "grassnet", version, about = "Exact Grassmannian Q-nets, Darboux nets and the discrete Darboux system")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the produced net, field or mesh here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Report verbosity.
    #[arg(long, global = true, value_enum, default_value_t = Verbosity::Summary)]
    pub report: Verbosity,
    /// Run the library core without the thread pool.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Random initial data in general position: Q-net walls or Darboux plaquettes.
    Generate(GenerateArgs),
    /// Fill a region from Q-net walls.
    Propagate(PropagateArgs),
    /// Check every stored square of a Q-net or Darboux net; exits 1 on failure.
    Verify(InputArgs),
    /// Extract coefficients of a Q-net or Darboux net as a field file.
    Extract(ExtractArgs),
    /// Evolve initial rotation coefficients with the Darboux map.
    Evolve(EvolveArgs),
    /// Check 4D consistency of Q-net propagation or of the Darboux map.
    Consistency(ConsistencyArgs),
    /// Write a 2D slice of a rank-0 net in P^3 as a Wavefront OBJ quad mesh.
    ExportMesh(MeshArgs),
    /// Intersect the edge lines of a Q-net with a random plane to get a Darboux net.
    Slice(SliceArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Verbosity {
    /// Totals and failures only.
    Summary,
    /// One line per checked square or cube.
    Full,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Qnet,
    Darboux,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Coeffs {
    /// Q-net coefficients `a^ij`.
    A,
    /// Darboux-net coefficients `r^ij`.
    R,
    /// Lamé-type potentials on edges.
    Lame,
    /// Rotation coefficients `b^ij`.
    B,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Layered,
    Lexicographic,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Axes {
    Lowest,
    Highest,
}

#[derive(Args, Debug)]
pub struct RandomArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Integer entries are drawn from `[-bound, bound]`.
    #[arg(long, default_value_t = 10)]
    pub bound: i64,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value_t = Kind::Qnet)]
    pub kind: Kind,
    /// Lattice dimension.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Projective dimension of the planes.
    #[arg(long, default_value_t = 0)]
    pub rank: usize,
    /// Ambient projective dimension; defaults to `4r+3`.
    #[arg(long)]
    pub dim: Option<usize>,
    /// `EXTENTS[@ORIGIN]`, e.g. `2x2x2` or `2,2,2@0,0,1`; defaults to `2` on every axis.
    #[arg(long)]
    pub region: Option<String>,
    #[command(flatten)]
    pub random: RandomArgs,
}

#[derive(Args, Debug)]
pub struct InputArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Args, Debug)]
pub struct PropagateArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Region to fill; defaults to the bounding box of the input.
    #[arg(long)]
    pub region: Option<String>,
    #[arg(long, value_enum, default_value_t = Order::Layered)]
    pub order: Order,
    #[arg(long, value_enum, default_value_t = Axes::Lowest)]
    pub axes: Axes,
}

#[derive(Args, Debug)]
pub struct ExtractArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub region: Option<String>,
    #[arg(long, value_enum, default_value_t = Coeffs::B)]
    pub coeffs: Coeffs,
}

#[derive(Args, Debug)]
pub struct EvolveArgs {
    /// Plaquette field holding the initial rotation coefficients.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub region: Option<String>,
    #[arg(long, value_enum, default_value_t = Order::Layered)]
    pub order: Order,
    #[arg(long, value_enum, default_value_t = Axes::Lowest)]
    pub axes: Axes,
    /// Compute every plaquette from all of its cubes and require agreement.
    #[arg(long)]
    pub cross_check: bool,
}

#[derive(Args, Debug)]
pub struct ConsistencyArgs {
    #[arg(long, value_enum, default_value_t = Kind::Qnet)]
    pub kind: Kind,
    /// Q-net (with `--kind qnet`) or plaquette field (with `--kind darboux`)
    /// containing a unit 4-cube at the region origin. Random data when absent.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub rank: usize,
    /// Ambient projective dimension; defaults to `5r+4`.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Number of random runs, with seeds `seed, seed+1, ...`.
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    /// Base vertex of the 4-cube checked in an input file.
    #[arg(long)]
    pub base: Option<String>,
    #[command(flatten)]
    pub random: RandomArgs,
}

#[derive(Args, Debug)]
pub struct MeshArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// 2D slice, e.g. `2x2x0@0,0,1`.
    #[arg(long)]
    pub region: String,
}

#[derive(Args, Debug)]
pub struct SliceArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[command(flatten)]
    pub random: RandomArgs,
}

/// Result of one command.
#[derive(Debug, Default)]
pub struct Outcome {
    pub data: Option<String>,
    pub report: Vec<String>,
    pub ok: bool,
}

impl Outcome {
    fn data(data: String, report: Vec<String>) -> Self {
        Outcome {
            data: Some(data),
            report,
            ok: true,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let full = cli.report == Verbosity::Full;
    match &cli.command {
        Command::Generate(a) => generate(a),
        Command::Propagate(a) => propagate(a, exec),
        Command::Verify(a) => verify(&a.input, exec, full),
        Command::Extract(a) => extract(a, exec),
        Command::Evolve(a) => evolve(a, exec),
        Command::Consistency(a) => consistency(a, full),
        Command::ExportMesh(a) => export_mesh(a),
        Command::Slice(a) => slice(a, exec),
    }
}

/// Parses `EXTENTS[@ORIGIN]`.
pub fn parse_region(text: &str) -> Result<Region> {
    let (extents, origin) = match text.split_once('@') {
        Some((e, o)) => (e, Some(o)),
        None => (text, None),
    };
    let extents = parse_extents(extents).with_context(|| format!("invalid region extents `{extents}`"))?;
    ensure!(!extents.is_empty(), "empty region");
    let origin = match origin {
        Some(o) => {
            let c = parse_coords(o)?;
            ensure!(c.len() == extents.len(), "region origin `{o}` has the wrong number of axes");
            VertexIndex::new(c)
        }
        None => VertexIndex::origin(extents.len()),
    };
    Ok(Region::new(origin, extents))
}

fn parse_coords(s: &str) -> Result<Vec<i64>> {
    s.trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .map(|p| p.trim().parse::<i64>().with_context(|| format!("invalid coordinate `{p}`")))
        .collect()
}

fn region_for(n_axes: usize, text: Option<&str>, fallback: impl FnOnce() -> Option<Region>) -> Result<Region> {
    let region = match text {
        Some(s) => parse_region(s)?,
        None => fallback().context("cannot infer a region from empty input; pass --region")?,
    };
    ensure!(
        region.dim() == n_axes,
        "region has {} axes, the input has {n_axes}",
        region.dim()
    );
    Ok(region)
}

/// Smallest region containing all `points`.
pub fn bounding_region<'a>(points: impl IntoIterator<Item = &'a VertexIndex>) -> Option<Region> {
    let mut lo: Option<Vec<i64>> = None;
    let mut hi: Vec<i64> = Vec::new();
    for p in points {
        match &mut lo {
            None => {
                lo = Some(p.coords().to_vec());
                hi = p.coords().to_vec();
            }
            Some(lo) => {
                for (k, &c) in p.coords().iter().enumerate() {
                    lo[k] = lo[k].min(c);
                    hi[k] = hi[k].max(c);
                }
            }
        }
    }
    let lo = lo?;
    let extents = lo.iter().zip(&hi).map(|(l, h)| (h - l) as u32).collect();
    Some(Region::new(VertexIndex::new(lo), extents))
}

fn edge_endpoints(net: &EdgeNet) -> Vec<VertexIndex> {
    net.iter()
        .flat_map(|(e, _)| [e.base.clone(), e.base.step(e.axis)])
        .collect()
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

enum NetFile {
    Point(QNet),
    Edge(EdgeNet),
}

fn read_net(path: &Path) -> Result<NetFile> {
    let text = read(path)?;
    let kind = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or_default();
    let net = match kind {
        "grassnet qnet" => NetFile::Point(io::parse_qnet(&text)?),
        "grassnet edgenet" => NetFile::Edge(io::parse_edge_net(&text)?),
        other => bail!("{}: expected a net file, found `{other}`", path.display()),
    };
    Ok(net)
}

fn read_qnet(path: &Path) -> Result<QNet> {
    match read_net(path)? {
        NetFile::Point(net) => Ok(net),
        NetFile::Edge(_) => bail!("{}: expected a Q-net, found a Darboux net", path.display()),
    }
}

fn plaquette_field(path: &Path) -> Result<grassnet::PlaquetteField> {
    match io::parse_field(&read(path)?)? {
        Field::Plaquette(f) => Ok(f),
        Field::Edge(_) => bail!("{}: expected a plaquette field, found an edge field", path.display()),
    }
}

fn fill_order(o: Order) -> FillOrder {
    match o {
        Order::Layered => FillOrder::Layered,
        Order::Lexicographic => FillOrder::Lexicographic,
    }
}

fn axis_choice(a: Axes) -> AxisChoice {
    match a {
        Axes::Lowest => AxisChoice::Lowest,
        Axes::Highest => AxisChoice::Highest,
    }
}

fn generate(a: &GenerateArgs) -> Result<Outcome> {
    let dim = a.dim.unwrap_or(4 * a.rank + 3);
    let region = match &a.region {
        Some(s) => parse_region(s)?,
        None => Region::from_extents(vec![2; a.n]),
    };
    ensure!(region.dim() == a.n, "region has {} axes, --n is {}", region.dim(), a.n);
    ensure!(a.random.bound >= 1, "--bound must be positive");
    let mut s = Sampler::new(a.random.seed, a.random.bound);
    let (data, records, kind) = match a.kind {
        Kind::Qnet => {
            if dim < 4 * a.rank + 3 {
                return Err(Error::DimensionBound {
                    what: "propagation",
                    d: dim,
                    bound: 4 * a.rank + 3,
                }
                .into());
            }
            let walls = random_walls(&mut s, a.n, a.rank, dim, &region)?;
            (io::write_qnet(&walls), walls.len(), "qnet")
        }
        Kind::Darboux => {
            let state = random_state(&mut s, a.n, a.rank, &region)?;
            (io::write_plaquette_field(state.field()), state.field().len(), "darboux")
        }
    };
    let ambient = match a.kind {
        Kind::Qnet => format!(" d={dim}"),
        Kind::Darboux => String::new(),
    };
    let report = vec![
        format!("command=generate kind={kind} n={} r={}{ambient} seed={}", a.n, a.rank, a.random.seed),
        format!("records={records} resamples={}", s.resamples()),
    ];
    Ok(Outcome::data(data, report))
}

fn propagate(a: &PropagateArgs, exec: Execution) -> Result<Outcome> {
    let walls = read_qnet(&a.input)?;
    let region = region_for(walls.n_axes(), a.region.as_deref(), || {
        bounding_region(walls.iter().map(|(v, _)| v))
    })?;
    let opts = PropagateOptions {
        order: fill_order(a.order),
        axes: axis_choice(a.axes),
        exec,
    };
    let net = propagate_net_with(&walls, &region, opts)?;
    let report = vec![
        format!("command=propagate region={region_label}", region_label = label(&region)),
        format!("vertices={} computed={}", net.len(), net.len().saturating_sub(walls.walls(&region).len())),
    ];
    Ok(Outcome::data(io::write_qnet(&net), report))
}

fn label(region: &Region) -> String {
    let e: Vec<String> = region.extents().iter().map(u32::to_string).collect();
    format!("{}@{}", e.join("x"), region.origin())
}

fn square_line(c: &SquareCheck) -> String {
    format!(
        "square base={} axes={},{} dim={} bound={} pass={}",
        c.loc.base, c.loc.i, c.loc.j, c.dim, c.bound, c.pass
    )
}

fn verify(path: &Path, exec: Execution, full: bool) -> Result<Outcome> {
    let net = read_net(path)?;
    let (kind, checks, cubes) = match &net {
        NetFile::Point(net) => ("qnet", net.verify_with(exec), if full { qnet_cubes(net)? } else { Vec::new() }),
        NetFile::Edge(net) => ("edgenet", net.verify_with(exec), if full { edge_cubes(net)? } else { Vec::new() }),
    };
    let failed = checks.iter().filter(|c| !c.pass).count();
    let mut report = vec![format!(
        "command=verify kind={kind} squares={} passed={} failed={failed}",
        checks.len(),
        checks.len() - failed
    )];
    report.extend(checks.iter().filter(|c| full || !c.pass).map(square_line));
    report.extend(cubes);
    report.push(format!("status={}", if failed == 0 { "pass" } else { "fail" }));
    Ok(Outcome {
        data: None,
        report,
        ok: failed == 0,
    })
}

/// Base and axes of every unit cube whose eight vertices are all present.
fn complete_cubes(n_axes: usize, present: impl Fn(&VertexIndex) -> bool, bases: &[VertexIndex]) -> Vec<(VertexIndex, [usize; 3])> {
    let mut out = Vec::new();
    for base in bases {
        for a in 0..n_axes {
            for b in a + 1..n_axes {
                for c in b + 1..n_axes {
                    let corners = cube_corners(base, [a, b, c]);
                    if corners.iter().all(&present) {
                        out.push((base.clone(), [a, b, c]));
                    }
                }
            }
        }
    }
    out
}

fn cube_corners(base: &VertexIndex, [a, b, c]: [usize; 3]) -> [VertexIndex; 8] {
    [
        base.clone(),
        base.step(a),
        base.step(b),
        base.step(c),
        base.steps(&[a, b]),
        base.steps(&[a, c]),
        base.steps(&[b, c]),
        base.steps(&[a, b, c]),
    ]
}

fn qnet_cubes(net: &QNet) -> Result<Vec<String>> {
    let bases: Vec<VertexIndex> = net.iter().map(|(v, _)| v.clone()).collect();
    let mut lines = Vec::new();
    for (base, axes) in complete_cubes(net.n_axes(), |v| net.contains(v), &bases) {
        let corners = cube_corners(&base, axes);
        let planes = corners.iter().map(|v| net.require(v)).collect::<grassnet::Result<Vec<_>>>()?;
        let span = join(&planes)?.projective_dim();
        lines.push(format!(
            "cube base={base} axes={},{},{} span={span} bound={}",
            axes[0],
            axes[1],
            axes[2],
            4 * net.rank() + 3
        ));
    }
    Ok(lines)
}

fn edge_cubes(net: &EdgeNet) -> Result<Vec<String>> {
    let bases: Vec<VertexIndex> = net.iter().map(|(e, _)| e.base.clone()).collect();
    let ends = edge_endpoints(net);
    let cubes = complete_cubes(net.n_axes(), |v| ends.contains(v), &bases);
    let mut lines = Vec::new();
    for (base, axes) in cubes {
        match net.cube_span_dim(&base, axes) {
            Ok(span) => lines.push(format!("cube base={base} axes={},{},{} span={span}", axes[0], axes[1], axes[2])),
            Err(Error::MissingEdge(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(lines)
}

fn extract(a: &ExtractArgs, exec: Execution) -> Result<Outcome> {
    let (field, kind) = match read_net(&a.input)? {
        NetFile::Point(net) => {
            let region = region_for(net.n_axes(), a.region.as_deref(), || {
                bounding_region(net.iter().map(|(v, _)| v))
            })?;
            match a.coeffs {
                Coeffs::A => (Field::Plaquette(extract_a_field(&net, &region.squares(), exec)?), "a"),
                Coeffs::Lame => {
                    let a_field = extract_a_field(&net, &region.squares(), exec)?;
                    (Field::Edge(lame_from_a(&a_field, &region, exec)?), "lame")
                }
                Coeffs::B => (Field::Plaquette(qnet_rotation_coeffs(&net, &region, exec)?), "b"),
                Coeffs::R => bail!("`r` coefficients belong to Darboux nets; this is a Q-net"),
            }
        }
        NetFile::Edge(net) => {
            let ends = edge_endpoints(&net);
            let region = region_for(net.n_axes(), a.region.as_deref(), || bounding_region(&ends))?;
            let squares: Vec<_> = net
                .stored_squares()
                .into_iter()
                .filter(|s| region.contains(&s.base) && region.contains(&s.base.steps(&[s.i, s.j])))
                .collect();
            match a.coeffs {
                Coeffs::R => (Field::Plaquette(extract_r_field(&net, &squares, exec)?), "r"),
                Coeffs::Lame => {
                    let r_field = extract_r_field(&net, &squares, exec)?;
                    (Field::Edge(potentials_s(&r_field, &region, exec)?), "lame")
                }
                Coeffs::B => (Field::Plaquette(edge_net_rotation_coeffs(&net, &region, exec)?), "b"),
                Coeffs::A => bail!("`a` coefficients belong to Q-nets; this is a Darboux net"),
            }
        }
    };
    let records = match &field {
        Field::Plaquette(f) => f.len(),
        Field::Edge(f) => f.len(),
    };
    let report = vec![format!("command=extract coeffs={kind} records={records}")];
    Ok(Outcome::data(io::write_field(&field), report))
}

fn evolve(a: &EvolveArgs, exec: Execution) -> Result<Outcome> {
    let field = plaquette_field(&a.input)?;
    let n_axes = field.n_axes();
    let region = region_for(n_axes, a.region.as_deref(), || {
        let corners: Vec<VertexIndex> = field
            .iter()
            .flat_map(|(s, _)| [s.base.clone(), s.base.steps(&[s.i, s.j])])
            .collect();
        bounding_region(&corners)
    })?;
    let initial = field.len();
    let state = DarbouxState::from_field(field)?;
    let opts = EvolveOptions {
        order: fill_order(a.order),
        axes: axis_choice(a.axes),
        exec,
        cross_check: a.cross_check,
    };
    let out = evolve_with(&state, &region, opts)?;
    let report = vec![
        format!("command=evolve region={} cross_check={}", label(&region), a.cross_check),
        format!("plaquettes={} initial={initial}", out.field().len()),
    ];
    Ok(Outcome::data(io::write_plaquette_field(out.field()), report))
}

fn consistency(a: &ConsistencyArgs, full: bool) -> Result<Outcome> {
    let mut report = Vec::new();
    let mut all = true;
    match &a.input {
        Some(path) => {
            let base = match &a.base {
                Some(b) => Some(VertexIndex::new(parse_coords(b)?)),
                None => None,
            };
            let consistent = match a.kind {
                Kind::Qnet => {
                    let net = read_qnet(path)?;
                    let base = base.unwrap_or_else(|| VertexIndex::origin(net.n_axes()));
                    let rep = check_4d_consistency(&HypercubeData::from_net(&net, &base)?)?;
                    report.push(format!("base={base} candidates_agree={} v_meet_agrees={}", rep.consistent, rep.v_meet.as_ref() == Some(&rep.candidates[0])));
                    rep.consistent
                }
                Kind::Darboux => {
                    let state = DarbouxState::from_field(plaquette_field(path)?)?;
                    let base = base.unwrap_or_else(|| VertexIndex::origin(state.n_axes()));
                    let rep = check_map_4d_consistency(&state, &base)?;
                    report.push(format!("base={base} compared={} mismatches={}", rep.compared.len(), rep.mismatches.len()));
                    rep.consistent()
                }
            };
            all &= consistent;
        }
        None => {
            for k in 0..a.count {
                let seed = a.random.seed + k;
                let mut s = Sampler::new(seed, a.random.bound);
                let line = match a.kind {
                    Kind::Qnet => {
                        let d = a.dim.unwrap_or(5 * a.rank + 4);
                        let data = random_generic_hypercube_data(&mut s, a.rank, d)?;
                        let rep = check_4d_consistency(&data)?;
                        let ok = rep.consistent && rep.v_meet.as_ref() == Some(&rep.candidates[0]);
                        all &= ok;
                        format!("seed={seed} r={} d={d} consistent={ok} resamples={}", a.rank, s.resamples())
                    }
                    Kind::Darboux => {
                        let (rep, singular) = random_map_check(&mut s, a.rank)?;
                        all &= rep.consistent();
                        format!(
                            "seed={seed} r={} compared={} mismatches={} singular_redraws={singular}",
                            a.rank,
                            rep.compared.len(),
                            rep.mismatches.len()
                        )
                    }
                };
                if full {
                    report.push(line);
                }
            }
            report.insert(0, format!("command=consistency runs={}", a.count));
        }
    }
    report.push(format!("consistent={all}"));
    Ok(Outcome {
        data: None,
        report,
        ok: all,
    })
}

fn random_map_check(s: &mut Sampler, r: usize) -> Result<(grassnet::darboux::MapConsistency, u64)> {
    let region = Region::unit(4);
    let mut singular = 0;
    loop {
        let state = random_state(s, 4, r, &region)?;
        match check_map_4d_consistency(&state, region.origin()) {
            Ok(rep) => return Ok((rep, singular)),
            Err(Error::SingularDenominator { .. }) => singular += 1,
            Err(e) => return Err(e.into()),
        }
    }
}

fn export_mesh(a: &MeshArgs) -> Result<Outcome> {
    let net = read_qnet(&a.input)?;
    let slice = parse_region(&a.region)?;
    ensure!(slice.dim() == net.n_axes(), "region has {} axes, the net has {}", slice.dim(), net.n_axes());
    let obj = export_obj(&net, &slice)?;
    let count = |p: &str| obj.lines().filter(|l| l.starts_with(p)).count();
    let report = vec![format!("command=export-mesh vertices={} faces={}", count("v "), count("f "))];
    Ok(Outcome::data(obj, report))
}

fn slice(a: &SliceArgs, exec: Execution) -> Result<Outcome> {
    let net = read_qnet(&a.input)?;
    let mut s = Sampler::new(a.random.seed, a.random.bound);
    let plane = random_slicing_plane(&mut s, net.rank(), net.ambient_dim());
    let edges = slice_qnet(&net, &plane, exec)?;
    let report = vec![format!("command=slice edges={}", edges.len())];
    Ok(Outcome::data(io::write_edge_net(&edges), report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regions() {
        let r = parse_region("2x3x0@1,0,-2").unwrap();
        assert_eq!(r.extents(), &[2, 3, 0]);
        assert_eq!(r.origin(), &VertexIndex::new(vec![1, 0, -2]));
        assert_eq!(parse_region("2,2").unwrap(), Region::from_extents(vec![2, 2]));
        assert_eq!(parse_region(&label(&r)).unwrap(), r);
        assert!(parse_region("2x").is_err());
        assert!(parse_region("2x2@1").is_err());
    }

    #[test]
    fn bounding_box() {
        let pts = [VertexIndex::new(vec![1, 5]), VertexIndex::new(vec![3, 2])];
        let r = bounding_region(&pts).unwrap();
        assert_eq!(r.origin(), &VertexIndex::new(vec![1, 2]));
        assert_eq!(r.extents(), &[2, 3]);
        assert!(bounding_region(&[]).is_none());
    }
}
