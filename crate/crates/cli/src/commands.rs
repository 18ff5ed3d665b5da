use std::fmt::Write as _;

use equichar_core::activations::{sample_activation, verify_pointwise_equivariance, ExportGrid, Spacing};
use equichar_core::repspaces::{cyclic_generators, equivariant_basis, symmetric_generators, tensor_action};
use equichar_core::tclass::{analyze_group, DEFAULT_GCD_ITER};
use equichar_core::{signed_normalize, ActivationFn, Error, GroupSpec, DEFAULT_CLOSURE_CAP};
use serde_json::{json, Value};

use crate::input::{builtin_group, env_tol, load_perm_generators, resolve_tol, EtaFile, GroupSpecFile};
use crate::json::{fmt_g17, to_string};
use crate::report::*;
use crate::{exit, BasisArgs, BasisGroup, CliError, Cli, Command, ExportArgs, GroupArgs, GroupSource, Outcome, SpacingArg, VerifyArgs};

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Classify(a) => classify(a),
        Command::Normalize(a) => normalize(a),
        Command::Basis(a) => basis(a),
        Command::Verify(a) => verify(a),
        Command::ExportActivation(a) => export_activation(a),
    }
}

/// The group, the resolved tolerance and the input echo.
fn load_group(source: &GroupSource, tol_flag: Option<f64>) -> Result<(GroupSpec, f64, Value), CliError> {
    let env = env_tol();
    if let Some(path) = &source.file {
        let file = GroupSpecFile::load(path)?;
        let tol = resolve_tol(tol_flag, file.tolerance, env.as_deref())?;
        let spec = file.to_spec(tol)?;
        let mut echo = GroupSpecFile { tolerance: Some(tol), ..file };
        echo.name = spec.name().to_string();
        Ok((spec, tol, serde_json::to_value(&echo).expect("plain data")))
    } else {
        let name = source.builtin.as_deref().expect("clap requires a source");
        let tol = resolve_tol(tol_flag, None, env.as_deref())?;
        let spec = builtin_group(name)?;
        let echo = GroupSpecFile::from_spec(&spec, Some(tol));
        let mut value = serde_json::to_value(&echo).expect("plain data");
        value["builtin"] = json!(name);
        Ok((spec, tol, value))
    }
}

fn report_outcome(report: &Report, code: i32) -> Outcome {
    Outcome { code, stdout: report.to_json(), files: Vec::new() }
}

pub fn classify(args: &GroupArgs) -> Result<Outcome, CliError> {
    let (spec, tol, input) = load_group(&args.source, args.tol)?;
    let analysis = analyze_group(&spec, tol, DEFAULT_GCD_ITER, DEFAULT_CLOSURE_CAP)?;
    let mut report = Report::new("classify", input);
    report.classification = Some((&analysis).into());
    report.family = Some(FamilyReport::from_analysis(&analysis, spec.dim()));
    report.warnings = classification_warnings(&analysis, tol, DEFAULT_GCD_ITER);
    Ok(report_outcome(&report, exit::OK))
}

pub fn normalize(args: &GroupArgs) -> Result<Outcome, CliError> {
    let (spec, tol, input) = load_group(&args.source, args.tol)?;
    let mut report = Report::new("normalize", input);
    match signed_normalize(&spec, tol) {
        Ok(scaling) => {
            report.scaling = Some((&scaling).into());
            Ok(report_outcome(&report, exit::OK))
        }
        Err(Error::UnboundedGroup(obstruction)) => {
            let message = obstruction.to_string();
            report.error = Some(ErrorReport {
                kind: "UnboundedGroup",
                message: message.clone(),
                obstruction: Some(obstruction.as_ref().into()),
            });
            Err(CliError {
                code: exit::UNBOUNDED,
                message: format!("no positive diagonal scaling exists: {message}"),
                stdout: Some(report.to_json()),
            })
        }
        Err(e) => Err(e.into()),
    }
}

pub fn basis(args: &BasisArgs) -> Result<Outcome, CliError> {
    let gens = match args.group {
        BasisGroup::Sym => symmetric_generators(args.n),
        BasisGroup::Cyclic => cyclic_generators(args.n),
        BasisGroup::File => load_perm_generators(args.generators.as_deref().expect("clap requires --generators"))?,
    };
    let a_in = tensor_action(args.n, args.k_in, &gens)?;
    let a_out = tensor_action(args.n, args.k_out, &gens)?;
    let basis = equivariant_basis(&a_in, &a_out)?;
    let group = match args.group {
        BasisGroup::Sym => format!("sym:{}", args.n),
        BasisGroup::Cyclic => format!("cyclic:{}", args.n),
        BasisGroup::File => format!("file:{}", gens.len()),
    };
    let input = json!({
        "n": args.n,
        "kIn": args.k_in,
        "kOut": args.k_out,
        "group": group,
        "generators": gens.iter().map(|g| g.images().to_vec()).collect::<Vec<_>>(),
    });
    let mut report = Report::new("basis", input);
    report.basis = Some(BasisSummary {
        n: args.n,
        k_in: args.k_in,
        k_out: args.k_out,
        group,
        dim_in: basis.dim_in,
        dim_out: basis.dim_out,
        count: basis.len(),
        orbit_sizes: basis.elements.iter().map(Vec::len).collect(),
        export: args.export.as_ref().map(|p| p.display().to_string()),
    });
    let mut files = Vec::new();
    if let Some(path) = &args.export {
        let export = json!({
            "schema": BASIS_SCHEMA,
            "shape": [basis.dim_out, basis.dim_in],
            "elements": basis.elements.iter()
                .map(|e| e.iter().map(|&(r, c)| [r, c]).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        });
        files.push((path.clone(), to_string(&export)));
    }
    Ok(Outcome { code: exit::OK, stdout: report.to_json(), files })
}

fn parse_activation(spec: &str, tol: f64) -> Result<ActivationFn, CliError> {
    match spec {
        "relu" => Ok(ActivationFn::Relu),
        "tanh" => Ok(ActivationFn::Tanh),
        "identity" => Ok(ActivationFn::Identity),
        other => match other.strip_prefix("eta:") {
            Some(path) => EtaFile::load(path.as_ref())?.activation(None, false, tol),
            None => Err(CliError::parse(format!("unknown activation `{other}` (relu, tanh, identity, eta:<file>)"))),
        },
    }
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let (spec, tol, mut input) = load_group(&args.source, args.tol)?;
    let f = parse_activation(&args.activation, tol)?;
    input["activation"] = json!(args.activation);
    input["trials"] = json!(args.trials);
    input["seed"] = json!(args.seed);
    let r = verify_pointwise_equivariance(&f, spec.generators(), args.trials, tol, args.seed)?;
    let mut report = Report::new("verify", input);
    report.verification = Some(VerificationReport::new(f.name(), args.seed, tol, &r));
    Ok(report_outcome(&report, if r.pass { exit::OK } else { exit::VERIFY_FAILED }))
}

pub fn export_activation(args: &ExportArgs) -> Result<Outcome, CliError> {
    let env = env_tol();
    let tol = resolve_tol(args.tol, None, env.as_deref())?;
    let f = EtaFile::load(&args.eta_file)?.activation(args.b, args.signed, tol)?;
    let spacing = match args.spacing {
        SpacingArg::Linear => Spacing::Linear,
        SpacingArg::Log => Spacing::Log,
    };
    let grid = ExportGrid { min: args.min, max: args.max, count: args.count, spacing };
    let rows = sample_activation(&f, &grid).map_err(|e| CliError::parse(e.to_string()))?;
    let mut csv = String::from("x,f_x\n");
    for (x, y) in rows {
        writeln!(csv, "{},{}", fmt_g17(x), fmt_g17(y)).expect("writing to a String");
    }
    Ok(match &args.out {
        Some(path) => Outcome { code: exit::OK, stdout: String::new(), files: vec![(path.clone(), csv)] },
        None => Outcome { code: exit::OK, stdout: csv, files: Vec::new() },
    })
}
