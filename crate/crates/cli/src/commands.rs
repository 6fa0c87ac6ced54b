use crate::render;
use crate::Failure;
use fairnav_core::fairness::Scorer;
use fairnav_core::planner::{load_plan_file, to_canonical_json, FrontExport, PlanFile, SolutionExport, SOLUTION_FORMAT};
use fairnav_core::{
    evolve_pareto, generate_city, hypervolume, load_city, oracle_pareto, save_city, surrogate_plan, CityMap,
    FairnessSpec, Objectives, PlannerParams, Preset,
};
use std::fs;
use std::path::Path;

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::validation(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::internal(format!("cannot write {}: {e}", path.display())))
}

fn city(path: &Path) -> Result<CityMap, Failure> {
    load_city(&read(path)?).map_err(|e| Failure {
        message: format!("{}: {e}", path.display()),
        ..Failure::from(e)
    })
}

/// Inline JSON or `@file`.
fn spec(arg: &str, map: &CityMap) -> Result<FairnessSpec, Failure> {
    let bytes = match arg.strip_prefix('@') {
        Some(path) => read(Path::new(path))?,
        None => arg.as_bytes().to_vec(),
    };
    let spec: FairnessSpec = serde_path_to_error::deserialize(&mut serde_json::Deserializer::from_slice(&bytes))
        .map_err(|e| Failure::validation(format!("spec: {}: {}", e.path(), e.inner())))?;
    spec.validate(map)?;
    Ok(spec)
}

fn plan_file(path: &Path) -> Result<PlanFile, Failure> {
    load_plan_file(&read(path)?).map_err(|e| Failure {
        message: format!("{}: {e}", path.display()),
        ..Failure::from(e)
    })
}

pub fn gen_city(preset: Preset, width: usize, height: usize, seed: u64, out: &Path) -> Result<(), Failure> {
    let map = generate_city(&preset.params(width, height), seed)?;
    write(out, &save_city(&map))
}

pub fn plan(city_path: &Path, spec_arg: &str, budget: usize, seed: u64, out: &Path) -> Result<(), Failure> {
    let map = city(city_path)?;
    let spec = spec(spec_arg, &map)?;
    let params = PlannerParams::with_budget(budget, seed);
    let front = evolve_pareto(&map, &spec, &params)?;
    print!("{}", render::front_table(&front));
    write(out, &to_canonical_json(&FrontExport::new(spec, params, front)))
}

pub fn audit(city_path: &Path, front_path: &Path, k: usize) -> Result<(), Failure> {
    let map = city(city_path)?;
    let file = plan_file(front_path)?;
    let front = file.front();
    let solution = front.solutions().get(k).ok_or_else(|| {
        Failure::validation(format!("{} has {} solutions, no index {k}", front_path.display(), front.len()))
    })?;
    let spec = file.spec();
    spec.validate(&map)?;
    let sensor_radius = file.params().sensor_radius;
    solution.path.validate(&map, file.params().budget)?;
    let audit = Scorer::new(&map, spec, sensor_radius)?.audit(solution.path.steps());
    let header = format!(
        "solution {k} of {}: efficiency {}, {} moves, spec {spec}",
        front.len(),
        solution.efficiency,
        solution.path.moves()
    );
    print!("{}", render::audit(&audit, &header));
    Ok(())
}

pub fn oracle(city_path: &Path, budget: usize, spec_arg: Option<&str>, out: &Path) -> Result<(), Failure> {
    let map = city(city_path)?;
    let spec = match spec_arg {
        Some(arg) => spec(arg, &map)?,
        None => FairnessSpec::demographic_parity(map.attributes()[0].name.clone()),
    };
    let front = oracle_pareto(&map, &spec, budget, 0)?;
    print!("{}", render::front_table(&front));
    write(out, &to_canonical_json(&FrontExport::new(spec, PlannerParams::with_budget(budget, 0), front)))
}

pub fn compare(city_path: &Path, paths: &[std::path::PathBuf]) -> Result<(), Failure> {
    if paths.len() != 2 {
        return Err(Failure::validation(format!("compare needs exactly two --front files, got {}", paths.len())));
    }
    let map = city(city_path)?;
    let files = [plan_file(&paths[0])?, plan_file(&paths[1])?];
    for (file, path) in files.iter().zip(paths) {
        file.spec().validate(&map)?;
        for s in file.front().solutions() {
            s.path.validate(&map, file.params().budget).map_err(|e| Failure {
                message: format!("{}: {e}", path.display()),
                ..Failure::from(e)
            })?;
        }
    }
    if files[0].spec() != files[1].spec() {
        return Err(Failure::validation(format!(
            "fronts use different specs: {} vs {}",
            files[0].spec(),
            files[1].spec()
        )));
    }
    let fronts = [files[0].front(), files[1].front()];
    let worst = fronts
        .iter()
        .flat_map(|f| f.solutions().iter().map(|s| s.unfairness))
        .fold(1.0f64, f64::max);
    let reference = Objectives::new(0, worst);
    let hv = [hypervolume(&fronts[0], reference), hypervolume(&fronts[1], reference)];
    println!("reference point: efficiency 0, unfairness {worst}");
    for i in 0..2 {
        println!(
            "{}: {} solutions, hypervolume {:.6}",
            paths[i].display(),
            fronts[i].len(),
            hv[i]
        );
    }
    let ratio = if hv[1] > 0.0 { hv[0] / hv[1] } else if hv[0] > 0.0 { f64::INFINITY } else { 1.0 };
    println!("hypervolume ratio (first / second): {ratio:.6}");
    println!(
        "first not weakly dominated by second: {}",
        fronts[0].violations_against(&fronts[1])
    );
    println!(
        "second not weakly dominated by first: {}",
        fronts[1].violations_against(&fronts[0])
    );
    Ok(())
}

pub fn surrogate(
    city_path: &Path,
    spec_arg: &str,
    budget: usize,
    weight: f64,
    out: &Path,
) -> Result<(), Failure> {
    let map = city(city_path)?;
    let spec = spec(spec_arg, &map)?;
    let params = PlannerParams::with_budget(budget, 0);
    let solution = surrogate_plan(&map, &spec, &params, weight)?;
    println!(
        "efficiency {}, unfairness {:.6}, {} moves",
        solution.efficiency,
        solution.unfairness,
        solution.path.moves()
    );
    let export = SolutionExport {
        format: SOLUTION_FORMAT.to_string(),
        spec,
        params,
        weight,
        solution,
    };
    write(out, &to_canonical_json(&export))
}

pub fn serve(port: Option<u16>) -> Result<(), Failure> {
    tracing_subscriber::fmt().with_writer(std::io::stderr).init();
    let mut config = fairnav_service::Config::from_env().map_err(|e| Failure::validation(e.to_string()))?;
    if let Some(port) = port {
        config.port = port;
    }
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::internal(e.to_string()))?;
    runtime
        .block_on(fairnav_service::serve(config))
        .map_err(|e| Failure::internal(e.to_string()))
}
