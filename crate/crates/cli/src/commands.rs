use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use cluster_crystal::cartan::CartanSpec;
use cluster_crystal::chart::ChartCrystal;
use cluster_crystal::crystal_a::act_ea_type_a;
use cluster_crystal::crystal_x::CrystalError;
use cluster_crystal::oracle::{minors_a, random_cell_matrix, twist, twist_inverse};
use cluster_crystal::seed::SeedJson;
use cluster_crystal::tori::{ensemble, mutate_a_point, mutate_x_point, APoint, PointJson, Structure, XPoint};
use cluster_crystal::tropical::{
    crystal_check, emit_dot, glue_check, random_box_point, trop_act, trop_mutate, trop_wt_eps_phi, CrystalReport,
    TropPoint, TropPointJson,
};
use cluster_crystal::verify::run_suite;
use cluster_crystal::{CartanData, PositiveRationals, QMatrix, Rational, Seed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use crate::error::CliError;
use crate::{
    ActArgs, Command, EnsembleArgs, GraphArgs, MinorsArgs, MutateArgs, OracleCommand, SeedCommand, SeedPrint,
    SeedSource, StructureArg, TropCheckArgs, TropCommand, TwistArgs,
};

/// Text for stdout; `ok = false` exits with 1 after printing.
pub struct Output {
    pub text: String,
    pub ok: bool,
}

impl Output {
    fn json<T: Serialize>(value: &T) -> Result<Output, CliError> {
        Output::json_status(value, true)
    }

    fn json_status<T: Serialize>(value: &T, ok: bool) -> Result<Output, CliError> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Domain { kind: "internal", detail: e.to_string() })?;
        text.push('\n');
        Ok(Output { text, ok })
    }

    fn text(text: String) -> Output {
        Output { text, ok: true }
    }
}

pub fn run(command: Command) -> Result<Output, CliError> {
    match command {
        Command::Seed(SeedCommand::Build { source, print }) => seed_build(&source, print),
        Command::Seed(SeedCommand::Sample { source, structure, radius, rng_seed }) => {
            seed_sample(&source, structure, radius, rng_seed)
        }
        Command::Mutate(args) => mutate(&args),
        Command::Ensemble(args) => ensemble_cmd(&args),
        Command::Act(args) => act(&args),
        Command::Minors(args) => minors(&args),
        Command::Twist(args) => twist_cmd(&args),
        Command::Oracle(OracleCommand::Verify { cartan, word, trials, rng_seed }) => {
            oracle_verify(&cartan, word, trials, rng_seed)
        }
        Command::Trop(TropCommand::Act { structure, j, n, point }) => trop_act_cmd(structure, j, n, &point),
        Command::Trop(TropCommand::Mutate { k, point }) => trop_mutate_cmd(&k, &point),
        Command::Trop(TropCommand::Check(args)) => trop_check(&args),
        Command::Trop(TropCommand::Graph(args)) | Command::Graph(args) => graph(&args),
    }
}

fn structure(s: StructureArg) -> Structure {
    match s {
        StructureArg::A => Structure::A,
        StructureArg::X => Structure::X,
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let mut s = String::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| s = t)
    };
    res.map_err(|e| CliError::Usage { kind: "io", detail: format!("{}: {e}", path.display()) })?;
    Ok(s)
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read_text(path)?)
        .map_err(|e| CliError::Usage { kind: "invalid_json", detail: format!("{}: {e}", path.display()) })
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Usage { kind: "io", detail: format!("{}: {e}", path.display()) })
}

fn parse_cartan(s: &str) -> Result<CartanData, CliError> {
    if s.trim_start().starts_with('{') {
        let spec: CartanSpec = serde_json::from_str(s)
            .map_err(|e| CliError::Usage { kind: "invalid_json", detail: format!("--cartan: {e}") })?;
        Ok(spec.build()?)
    } else {
        Ok(CartanData::parse_label(s)?)
    }
}

fn load_seed(source: &SeedSource) -> Result<Arc<Seed>, CliError> {
    let seed = match (&source.seed, &source.cartan, &source.word) {
        (Some(path), _, _) => Seed::from_json(&read_json::<SeedJson>(path)?)?,
        (None, Some(cartan), Some(word)) => Seed::from_word(Arc::new(parse_cartan(cartan)?), word.clone())?,
        _ => return Err(CliError::usage("give either --seed FILE or both --cartan and --word")),
    };
    Ok(Arc::new(seed.mutate_sequence(&source.mutations)?))
}

fn parse_letters(spec: &str, rank: usize) -> Result<Vec<usize>, CliError> {
    if spec.trim() == "all" {
        return Ok((1..=rank).collect());
    }
    let letters = spec
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| CliError::usage(format!("--letters: cannot parse {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(&bad) = letters.iter().find(|&&i| i == 0 || i > rank) {
        return Err(CrystalError::LetterOutOfRange(bad).into());
    }
    Ok(letters)
}

fn read_matrix(path: &Path) -> Result<QMatrix, CliError> {
    let rows: Vec<Vec<Rational>> = read_json(path)?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::usage(format!("{}: expected a nonempty square matrix", path.display())));
    }
    Ok(QMatrix::from_rows(rows))
}

fn grid(m: &QMatrix) -> String {
    let cells: Vec<Vec<String>> = m.to_rows().iter().map(|r| r.iter().map(Rational::to_string).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

fn seed_build(source: &SeedSource, print: SeedPrint) -> Result<Output, CliError> {
    let seed = load_seed(source)?;
    Ok(match print {
        SeedPrint::Json => Output::json(&seed.to_json())?,
        SeedPrint::BTilde => Output::text(grid(&seed.b_tilde())),
        SeedPrint::B => Output::text(grid(seed.b_matrix())),
        SeedPrint::M => Output::text(grid(&seed.m_matrix())),
        SeedPrint::Hash => Output::text(format!("{}\n", seed.content_hash())),
    })
}

fn seed_sample(source: &SeedSource, st: StructureArg, radius: Option<i64>, rng_seed: u64) -> Result<Output, CliError> {
    let seed = load_seed(source)?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    match (radius, st) {
        (Some(r), _) if r < 0 => Err(CliError::usage("--box must be nonnegative")),
        (Some(r), st) => Output::json(&TropPoint::random(structure(st), seed, r, &mut rng).to_json()),
        (None, StructureArg::A) => Output::json(&APoint::random(seed, &mut rng).to_json()),
        (None, StructureArg::X) => Output::json(&XPoint::random(seed, &mut rng).to_json()),
    }
}

fn mutate(args: &MutateArgs) -> Result<Output, CliError> {
    let Some(path) = &args.point else {
        let seed = load_seed(&args.source)?;
        return Output::json(&seed.mutate_sequence(&args.k)?.to_json());
    };
    let json: PointJson<Rational> = read_json(path)?;
    match args.structure {
        Some(StructureArg::A) => {
            let p = args.k.iter().try_fold(APoint::from_json(&json)?, |p, &k| mutate_a_point(k, &p))?;
            Output::json(&p.to_json())
        }
        Some(StructureArg::X) => {
            let p = args.k.iter().try_fold(XPoint::from_json(&json)?, |p, &k| mutate_x_point(k, &p))?;
            Output::json(&p.to_json())
        }
        None => Err(CliError::usage("--point requires --structure")),
    }
}

fn ensemble_cmd(args: &EnsembleArgs) -> Result<Output, CliError> {
    let a = APoint::from_json(&read_json(&args.point)?)?;
    Output::json(&ensemble(&a)?.to_json())
}

fn act(args: &ActArgs) -> Result<Output, CliError> {
    if args.c.is_zero() {
        return Err(CrystalError::ZeroParameter.into());
    }
    let json: PointJson<Rational> = read_json(&args.point)?;
    match args.structure {
        StructureArg::A => {
            let a = APoint::from_json(&json)?;
            let out = if args.closed_form_type_a {
                if !a.seed().is_fresh() {
                    return Err(CrystalError::NotFresh.into());
                }
                act_ea_type_a(args.j, &args.c, &a)?
            } else {
                let chart = ChartCrystal::new(Structure::A, a.seed())?;
                APoint::new(a.seed().clone(), chart.act(&PositiveRationals, args.j, &args.c, a.coords())?)?
            };
            Output::json(&out.to_json())
        }
        StructureArg::X => {
            if args.closed_form_type_a {
                return Err(CliError::usage("--closed-form-typeA applies to --structure a"));
            }
            let x = XPoint::from_json(&json)?;
            let chart = ChartCrystal::new(Structure::X, x.seed())?;
            let out = XPoint::new(x.seed().clone(), chart.act(&PositiveRationals, args.j, &args.c, x.coords())?)?;
            Output::json(&out.to_json())
        }
    }
}

fn minors(args: &MinorsArgs) -> Result<Output, CliError> {
    let seed = load_seed(&args.source)?;
    let g = match &args.matrix {
        Some(path) => read_matrix(path)?,
        None => {
            if !seed.cartan().is_type_a() {
                return Err(cluster_crystal::oracle::OracleError::NotTypeA.into());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(args.rng_seed);
            random_cell_matrix(seed.cartan(), seed.word(), &mut rng).matrix
        }
    };
    let a = minors_a(&seed, &g)?;
    Output::json(&json!({ "matrix": g.to_rows(), "point": a.to_json() }))
}

fn twist_cmd(args: &TwistArgs) -> Result<Output, CliError> {
    let g = read_matrix(&args.matrix)?;
    if g.rows() < 2 {
        return Err(CliError::usage("matrix must be at least 2×2"));
    }
    CartanData::of_type('A', g.rows() - 1)?.validate_word(&args.word, false)?;
    let h = if args.inverse { twist_inverse(&args.word, &g)? } else { twist(&args.word, &g)? };
    Output::json(&h.to_rows())
}

fn oracle_verify(cartan: &str, word: Vec<usize>, trials: usize, rng_seed: u64) -> Result<Output, CliError> {
    let cartan = parse_cartan(cartan)?;
    let spec = CartanSpec::from(&cartan);
    let seed = Arc::new(Seed::from_word(Arc::new(cartan), word.clone())?);
    let checks = run_suite(&seed, trials, rng_seed);
    let passed = checks.iter().all(|c| c.passed());
    let report = json!({
        "cartan": spec,
        "word": word,
        "trials": trials,
        "rng_seed": rng_seed,
        "checks": checks,
        "passed": passed,
    });
    Output::json_status(&report, passed)
}

fn trop_act_cmd(st: Option<StructureArg>, j: usize, n: i64, path: &Path) -> Result<Output, CliError> {
    let b = TropPoint::from_json(&read_json::<TropPointJson>(path)?)?;
    if let Some(st) = st {
        if structure(st) != b.structure() {
            return Err(CliError::usage(format!("--structure {} does not match the point's structure {}", structure(st), b.structure())));
        }
    }
    let chart = ChartCrystal::new(b.structure(), b.seed())?;
    let out = trop_act(&chart, j, n, &b)?;
    let weights: Vec<_> = trop_wt_eps_phi(&chart, &out)?
        .into_iter()
        .map(|(wt, eps, phi)| json!({ "wt": wt, "epsilon": eps, "phi": phi }))
        .collect();
    let mut value = serde_json::to_value(out.to_json()).expect("point serializes");
    value["weights"] = json!(weights);
    Output::json(&value)
}

fn trop_mutate_cmd(ks: &[i64], path: &Path) -> Result<Output, CliError> {
    let b = TropPoint::from_json(&read_json::<TropPointJson>(path)?)?;
    let out = ks.iter().try_fold(b, |p, &k| trop_mutate(k, &p))?;
    Output::json(&out.to_json())
}

fn trop_check(args: &TropCheckArgs) -> Result<Output, CliError> {
    if args.radius < 0 {
        return Err(CliError::usage("--box must be nonnegative"));
    }
    let seed = load_seed(&args.source)?;
    let letters = parse_letters(&args.letters, seed.cartan().rank())?;
    let structures = match args.structure {
        Some(st) => vec![structure(st)],
        None => vec![Structure::A, Structure::X],
    };
    let paths = seed.mutation_paths(args.depth);
    let mut rng = ChaCha8Rng::seed_from_u64(args.rng_seed);
    let mut results = BTreeMap::new();
    let mut passed = true;
    for st in structures {
        let base = ChartCrystal::new(st, &seed)?;
        let mut axioms = CrystalReport::default();
        let mut gluing = CrystalReport::default();
        for path in &paths {
            let chart = ChartCrystal::new(st, &seed.mutate_sequence(path)?)?;
            let sample: Vec<Vec<i64>> = (0..args.points).map(|_| random_box_point(seed.len(), args.radius, &mut rng)).collect();
            axioms.merge(crystal_check(&chart, &sample, &letters)?);
            if !path.is_empty() {
                let sample: Vec<Vec<i64>> = (0..args.points).map(|_| random_box_point(seed.len(), args.radius, &mut rng)).collect();
                gluing.merge(glue_check(&base, &chart, &sample, &letters)?);
            }
        }
        passed &= axioms.passed() && gluing.passed();
        let mut entry = json!({ "axioms": axioms });
        if !paths.iter().all(Vec::is_empty) {
            entry["gluing"] = json!(gluing);
        }
        results.insert(st.to_string(), entry);
    }
    let report = json!({
        "seed": seed.content_hash(),
        "charts": paths.len(),
        "letters": letters,
        "box": args.radius,
        "results": results,
        "passed": passed,
    });
    Output::json_status(&report, passed)
}

fn graph(args: &GraphArgs) -> Result<Output, CliError> {
    let seed = load_seed(&args.source)?;
    let letters = parse_letters(&args.letters, seed.cartan().rank())?;
    let chart = ChartCrystal::new(structure(args.structure), &seed)?;
    let dot = emit_dot(&chart, args.radius, &letters)?;
    match &args.out {
        Some(path) => {
            write_text(path, &dot)?;
            Ok(Output::text(String::new()))
        }
        None => Ok(Output::text(dot)),
    }
}
