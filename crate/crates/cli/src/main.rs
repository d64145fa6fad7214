use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use polyrigid::cauchy::{
    count_sign_changes, dent, dihedral_variation, sign_subgraph, sign_vector_from_flex, topo_lemma_witness_search,
    vertex_sign_lemma_check,
};
use polyrigid::generate::trial_rng;
use polyrigid::hessian::{lambda_matrix, pd_probe, rigidity_from_lambda, ProbeConfig};
use polyrigid::io::{analyze, fmt_f64, instance_hash, CsvTable, FrameworkFile, Report};
use polyrigid::rigidity::{
    equilibrium_residual, equilibrium_stress_space, is_infinitesimally_rigid, is_proper, nontrivial_flexes,
};
use polyrigid::suspension::{
    inductive_proper_stress, lambda_scalar, random_suspension, suspension_rigidity, SuspensionProfile,
};
use polyrigid::{Error, Framework, Tolerance};

#[derive(Parser)]
#[command(name = "polyrigid", version, about = "Infinitesimal rigidity of polyhedral frameworks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Relative singular value cutoff for numerical rank.
    #[arg(long, global = true, default_value_t = 1e-9)]
    rank_tol: f64,
    /// Geometric cutoff on coordinates rescaled to unit diameter.
    #[arg(long, global = true, default_value_t = 1e-9)]
    geom_tol: f64,
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit the command's table instead of the JSON report.
    #[arg(long, global = true)]
    csv: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Convexity, rigidity, flex and stress space dimensions.
    Analyze { file: PathBuf },
    /// Equilibrium stresses; `--inductive` builds one edge at a time on a
    /// suspension.
    Stress {
        file: PathBuf,
        #[arg(long)]
        inductive: bool,
    },
    /// Lambda of a suspension, or the Lambda matrix of a decomposition.
    Lambda { file: PathBuf },
    /// Replace edges by the opposite diagonals of their quadrilaterals.
    Dent {
        file: PathBuf,
        #[arg(long = "edge", value_parser = parse_edge, required = true)]
        edges: Vec<(usize, usize)>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a random suspension.
    Suspend {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Profile::Convex)]
        profile: Profile,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sign analysis of a non-trivial infinitesimal flex.
    Signs {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        flex_index: usize,
    },
    /// Sample Lambda matrices on random decomposed polyhedra.
    ProbePd {
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Convex,
    Star,
    Random,
}

impl From<Profile> for SuspensionProfile {
    fn from(p: Profile) -> Self {
        match p {
            Profile::Convex => SuspensionProfile::Convex,
            Profile::Star => SuspensionProfile::Star,
            Profile::Random => SuspensionProfile::Random,
        }
    }
}

fn parse_edge(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected i,j")?;
    let p = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

/// The JSON report and its flat table, one of which is printed.
struct Output(Report, CsvTable);

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::InvariantViolation(_)) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let g = &cli.global;
    let tol = Tolerance::new(g.rank_tol, g.geom_tol)?;
    let out = match &cli.command {
        Command::Analyze { file } => cmd_analyze(&load(file)?, &tol)?,
        Command::Stress { file, inductive } => cmd_stress(&load(file)?, *inductive, &tol)?,
        Command::Lambda { file } => cmd_lambda(&load(file)?, &tol)?,
        Command::Dent { file, edges, out } => return cmd_dent(&load(file)?, edges, out.as_deref(), &tol),
        Command::Suspend { n, profile, out } => return cmd_suspend(*n, *profile, g.seed, out.as_deref(), &tol),
        Command::Signs { file, flex_index } => cmd_signs(&load(file)?, *flex_index, &tol)?,
        Command::ProbePd { trials, out } => cmd_probe(*trials, g.seed, out, &tol)?,
    };
    let Output(report, table) = out;
    if g.csv {
        print!("{}", table.to_csv_string());
    } else {
        println!("{}", report.with_seed(g.seed).to_json_string());
    }
    Ok(())
}

fn load(path: &Path) -> anyhow::Result<FrameworkFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("off")) {
        let (v, f) = polyrigid::io::parse_off(&text)?;
        let s = polyrigid::PolyhedralSurface::new(v, f)?;
        return Ok(FrameworkFile::from_surface(&s));
    }
    FrameworkFile::from_json_str(&text).with_context(|| format!("loading {}", path.display()))
}

fn write_or_print(file: &FrameworkFile, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => file.save(p).with_context(|| format!("writing {}", p.display()))?,
        None => println!("{}", file.to_json_string()),
    }
    Ok(())
}

fn kind_name(fw: &Framework, k: usize) -> String {
    serde_json::to_value(fw.edges()[k].2).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn cmd_analyze(file: &FrameworkFile, tol: &Tolerance) -> anyhow::Result<Output> {
    let v = analyze(file, tol)?;
    let mut table = CsvTable::new(["key", "value"]);
    if let serde_json::Value::Object(m) = serde_json::to_value(&v)? {
        for (k, x) in m {
            table.push([k, x.to_string()]);
        }
    }
    Ok(Output(Report::new("analyze", Some(file), tol, v), table))
}

fn cmd_stress(file: &FrameworkFile, inductive: bool, tol: &Tolerance) -> anyhow::Result<Output> {
    if inductive {
        let s = file.suspension(tol)?;
        let ind = inductive_proper_stress(&s, tol)?;
        let fw = ind.framework.clone().expect("framework is kept");
        let rigid = suspension_rigidity(&s, tol)?;
        // suspension order N, S, p_1.. back to file indices
        let poles = file.poles.expect("suspension has poles");
        let eq = file.equator.as_ref().expect("suspension has an equator");
        let back = |v: usize| match v {
            0 => poles.north,
            1 => poles.south,
            k => eq[k - 2],
        };
        let mut table = CsvTable::new(["i", "j", "kind", "omega"]);
        for (k, &(i, j, _)) in fw.edges().iter().enumerate() {
            table.push([back(i).to_string(), back(j).to_string(), kind_name(&fw, k), fmt_f64(ind.stress.omega[k])]);
        }
        let verdicts = json!({
            "method": "inductive",
            "proper": is_proper(&fw, &ind.stress)?,
            "residual": equilibrium_residual(&fw, &ind.stress)?,
            "fallback": ind.fallback,
            "rigid": rigid,
            "edges": table.rows,
        });
        let r = Report::new("stress", Some(file), tol, verdicts).with_details(&ind.steps);
        return Ok(Output(r, table));
    }
    let fw = file.framework(tol)?;
    let basis = equilibrium_stress_space(&fw, tol);
    let mut header = vec!["i".to_string(), "j".into(), "kind".into()];
    header.extend((0..basis.len()).map(|b| format!("omega_{b}")));
    let mut table = CsvTable::new(header);
    for (k, &(i, j, _)) in fw.edges().iter().enumerate() {
        let mut row = vec![i.to_string(), j.to_string(), kind_name(&fw, k)];
        row.extend(basis.iter().map(|s| fmt_f64(s.omega[k])));
        table.push(row);
    }
    let proper: Vec<bool> = basis.iter().map(|s| is_proper(&fw, s)).collect::<polyrigid::Result<_>>()?;
    let verdicts = json!({
        "method": "null-space",
        "stress_dimension": basis.len(),
        "basis_proper": proper,
        "basis": basis,
    });
    Ok(Output(Report::new("stress", Some(file), tol, verdicts), table))
}

fn cmd_lambda(file: &FrameworkFile, tol: &Tolerance) -> anyhow::Result<Output> {
    if file.tetrahedra.is_some() {
        let d = file.decomposition(tol)?;
        let lm = lambda_matrix(&d, tol)?;
        let rigid = rigidity_from_lambda(&d, tol)?;
        let r = lm.dim();
        let mut header = vec!["k".to_string(), "i".into(), "j".into(), "eigenvalue".into()];
        header.extend((0..r).map(|c| format!("col_{c}")));
        let mut table = CsvTable::new(header);
        for (k, &(i, j)) in d.interior_edges().iter().enumerate() {
            let mut row = vec![k.to_string(), i.to_string(), j.to_string(), fmt_f64(lm.eigenvalues[k])];
            row.extend(lm.entries[k].iter().map(|&x| fmt_f64(x)));
            table.push(row);
        }
        let verdicts = json!({
            "kind": "matrix",
            "interior_edges": d.interior_edges(),
            "rank": lm.rank,
            "min_eigenvalue": lm.min_eigenvalue(),
            "asymmetry": lm.asymmetry,
            "rigid": rigid,
        });
        let details =
            json!({ "matrix": lm.entries, "eigenvalues": lm.eigenvalues, "singular_values": lm.singular_values });
        return Ok(Output(Report::new("lambda", Some(file), tol, verdicts).with_details(details), table));
    }
    let s = file.suspension(tol)?;
    let b = lambda_scalar(&s, tol)?;
    let rigid = is_infinitesimally_rigid(&Framework::from_surface(s.surface()), tol)?;
    let eq = &b.normalized;
    let mut table = CsvTable::new(["i", "z", "r", "theta", "a", "b", "height_term", "turn_term", "simplex_term"]);
    for i in 0..s.n() {
        table.push([
            (i + 1).to_string(),
            fmt_f64(eq.z[i]),
            fmt_f64(eq.r[i]),
            fmt_f64(eq.theta[i]),
            fmt_f64(b.a[i]),
            fmt_f64(b.b[i]),
            fmt_f64(b.height_terms[i]),
            fmt_f64(b.turn_terms[i]),
            fmt_f64(b.simplex_terms[i]),
        ]);
    }
    let verdicts = json!({
        "kind": "scalar",
        "lambda": b.lambda,
        "lambda_simplex": b.lambda_simplex,
        "lambda_expression": b.lambda_expression,
        "physical": b.physical,
        "rigid": rigid,
    });
    Ok(Output(Report::new("lambda", Some(file), tol, verdicts).with_details(&b), table))
}

fn cmd_dent(file: &FrameworkFile, edges: &[(usize, usize)], out: Option<&Path>, tol: &Tolerance) -> anyhow::Result<()> {
    let mut s = file.surface(tol)?;
    let mut new_edges = Vec::new();
    for &e in edges {
        let d = dent(&s, e, tol)?;
        new_edges.push(d.new_edge);
        s = d.surface;
    }
    let dented = FrameworkFile::from_surface(&s).with_metadata(json!({
        "dented_from": instance_hash(file),
        "dented_edges": edges,
        "new_edges": new_edges,
    }));
    write_or_print(&dented, out)
}

fn cmd_suspend(n: usize, profile: Profile, seed: u64, out: Option<&Path>, tol: &Tolerance) -> anyhow::Result<()> {
    let mut rng = trial_rng(seed, 0);
    let s = random_suspension(&mut rng, n, profile.into(), tol)?;
    let name = profile.to_possible_value().expect("named").get_name().to_string();
    let f = FrameworkFile::from_suspension(&s).with_metadata(json!({ "n": n, "profile": name, "seed": seed }));
    write_or_print(&f, out)
}

fn cmd_signs(file: &FrameworkFile, flex_index: usize, tol: &Tolerance) -> anyhow::Result<Output> {
    let surface = file.surface(tol)?;
    let flexes = nontrivial_flexes(&Framework::from_surface(&surface), tol);
    if flex_index >= flexes.len() {
        return Err(Error::Precondition(format!(
            "flex index {flex_index} out of range: the surface has {} non-trivial flexes",
            flexes.len()
        ))
        .into());
    }
    let m = &flexes[flex_index];
    let var = dihedral_variation(&surface, m)?;
    let sv = sign_vector_from_flex(&surface, m)?;
    let vertices = vertex_sign_lemma_check(&surface, &sv, tol)?;
    let (stats, topo) = if sv.nonzero() == 0 {
        (None, json!(null))
    } else {
        let g = sign_subgraph(&surface, &sv)?;
        let topo = match topo_lemma_witness_search(&g.embedding) {
            Ok(w) => {
                json!({ "searched": true, "witness": w.map(|w| w.iter().map(|s| s.symbol()).collect::<String>()) })
            }
            Err(e @ Error::TooLarge { .. }) => json!({ "searched": false, "reason": e.to_string() }),
            Err(e) => return Err(e.into()),
        };
        (Some(count_sign_changes(&g)), topo)
    };
    let mut table = CsvTable::new(["i", "j", "dihedral_variation", "sign"]);
    for (k, &(i, j)) in surface.edges().iter().enumerate() {
        table.push([i.to_string(), j.to_string(), fmt_f64(var[k]), sv.signs[k].symbol().to_string()]);
    }
    let verdicts = json!({
        "nontrivial_flexes": flexes.len(),
        "flex_index": flex_index,
        "signs": sv.to_symbols(),
        "nonzero": sv.nonzero(),
        "vertex_lemma_holds": vertices.iter().all(|v| v.satisfied),
        "sign_changes": stats,
        "topo_search": topo,
    });
    Ok(Output(Report::new("signs", Some(file), tol, verdicts).with_details(vertices), table))
}

fn cmd_probe(trials: usize, seed: u64, out: &Path, tol: &Tolerance) -> anyhow::Result<Output> {
    let cfg = ProbeConfig { seed, trials, ..ProbeConfig::default() };
    let report = pd_probe(&cfg, tol)?;
    let inst_dir = out.join("instances");
    std::fs::create_dir_all(&inst_dir).with_context(|| format!("creating {}", inst_dir.display()))?;
    let mut table = CsvTable::new([
        "trial",
        "trial_seed",
        "family",
        "weakly_convex",
        "r",
        "min_eigenvalue",
        "diagonal_positive",
        "positive_definite",
        "rigid",
    ]);
    for inst in &report.instances {
        let family = serde_json::to_value(inst.family)?.as_str().unwrap_or_default().to_string();
        table.push([
            inst.trial.to_string(),
            inst.trial_seed.to_string(),
            family,
            inst.weakly_convex.to_string(),
            inst.r.to_string(),
            fmt_f64(inst.min_eigenvalue),
            inst.diagonal_positive.to_string(),
            inst.positive_definite.to_string(),
            inst.rigid.to_string(),
        ]);
        let d = FrameworkFile {
            version: polyrigid::io::FORMAT_VERSION,
            vertices: inst.vertices.clone(),
            edges: Vec::new(),
            faces: None,
            poles: None,
            equator: None,
            tetrahedra: Some(inst.tetrahedra.clone()),
            metadata: Some(json!({ "probe": inst })),
        };
        d.save(inst_dir.join(format!("trial-{:05}.json", inst.trial)))?;
    }
    std::fs::write(out.join("report.json"), serde_json::to_string_pretty(&report)? + "\n")?;
    std::fs::write(out.join("instances.csv"), table.to_csv_string())?;
    let verdicts = json!({
        "attempted": report.attempted,
        "evaluated": report.instances.len(),
        "skipped": report.skipped,
        "weakly_convex": report.weakly_convex_count,
        "non_pd_weakly_convex": report.non_pd_weakly_convex.len(),
        "non_pd_controls": report.non_pd_controls,
        "diagonal_positive_rate": report.diagonal_positive_rate,
        "min_eigenvalue_quantiles": report.min_eigenvalue_quantiles,
        "out": out.display().to_string(),
    });
    Ok(Output(Report::new("probe-pd", None, tol, verdicts), table))
}
