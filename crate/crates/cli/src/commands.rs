use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};
use std::io::Write as _;

use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use signeq::alternating::{
    alt_sum_sweep, grid_pairs, riemann_grid_sum, half_length_pairs, write_sweep_csv, Interval, Parity,
    TestFunction,
};
use signeq::asymptotics::{
    compare_stieltjes, error_profile, order_sweep, stieltjes_verdict, StieltjesQuadrature,
    STIELTJES_MIN_EPSILON, SUP_GRID_POINTS,
};
use signeq::contour::{build_contour, build_contour_with_radius, integrate_contour, CenterMode};
use signeq::export::{csv_writer, num};
use signeq::fit::{fit_rate, fit_slope, RateFit, MIN_RATE_POINTS};
use signeq::legendre::{legendre_recurrence, Degree, MAX_DEGREE};
use signeq::roots::{find_roots, validate_bounds};
use signeq::sphere::{
    azimuthal_ratio, symmetry_trend, write_reports_csv, zonal_band_areas, AreaMethod, Azimuthal,
    BasisFunction, SphereSymmetryReport, SymmetryTrend,
};

use crate::chart::{render, ChartSpec};
use crate::config::{degrees, Format, RunConfig};

/// Named pass/fail checks gathered while a command runs.
#[derive(Default)]
pub struct Checks(Vec<(String, bool, String)>);

impl Checks {
    pub fn add(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.0.push((name.into(), ok, detail.into()));
    }

    pub fn all_pass(&self) -> bool {
        self.0.iter().all(|c| c.1)
    }

    pub fn print(&self) {
        for (name, ok, detail) in &self.0 {
            println!("check {name}: {} ({detail})", if *ok { "pass" } else { "FAIL" });
        }
    }
}

fn within(x: f64, (lo, hi): (f64, f64)) -> bool {
    (lo..=hi).contains(&x)
}

fn chart(cfg: &RunConfig, name: &str, spec: &ChartSpec) -> Result<()> {
    cfg.write_bytes(name, render(spec)?.as_bytes())?;
    Ok(())
}

fn write_fit(cfg: &RunConfig, name: &str, fit: &RateFit<f64>) -> Result<()> {
    if cfg.format == Format::Csv {
        cfg.write_with(name, |b| Ok(fit.write_csv(b)?))?;
    }
    Ok(())
}

pub fn roots(cfg: &RunConfig, list: &[usize], checks: &mut Checks) -> Result<()> {
    let degs = degrees(list, MAX_DEGREE)?;
    let results: Vec<_> = degs
        .par_iter()
        .map(|&n| {
            let r = find_roots::<f64>(n)?;
            let b = validate_bounds(&r);
            Ok((r, b))
        })
        .collect::<Result<_>>()?;
    for (r, b) in &results {
        let n = r.degree();
        match cfg.format {
            Format::Csv => {
                cfg.write_with(&format!("roots_n{n}.csv"), |w| Ok(r.write_csv(w)?))?;
                cfg.write_with(&format!("bounds_n{n}.csv"), |w| Ok(b.write_csv(w)?))?;
            }
            Format::Json => {
                #[derive(Serialize)]
                struct Out<'a> {
                    roots: &'a signeq::RootSet64,
                    bounds: &'a signeq::BoundReport64,
                }
                cfg.write_json(&format!("roots_n{n}.json"), &Out { roots: r, bounds: b })?;
            }
        }
        checks.add(
            format!("bounds n={n}"),
            b.all_pass(),
            format!("worst margin {}, {} failures", num(b.worst_margin), b.failures.len()),
        );
        let verified = r.verify(1e-12, 1e-12);
        checks.add(
            format!("residuals n={n}"),
            verified.is_ok(),
            format!("max relative residual {}", num(r.max_relative_residual())),
        );
    }
    Ok(())
}

pub fn sign_sum(
    cfg: &RunConfig,
    list: &[usize],
    interval: Interval<f64>,
    function: TestFunction,
    expect_slope: Option<(f64, f64)>,
    checks: &mut Checks,
) -> Result<()> {
    let reports = alt_sum_sweep(&degrees(list, MAX_DEGREE)?, interval, function)?;
    for r in reports.iter().filter(|r| r.root_count == 0) {
        eprintln!("warning: n={}: interval [{}, {}] holds no roots", r.n, r.interval.a, r.interval.b);
    }
    match cfg.format {
        Format::Csv => {
            cfg.write_with("sign_sum.csv", |w| Ok(write_sweep_csv(&reports, w)?))?;
        }
        Format::Json => {
            cfg.write_json("sign_sum.json", &reports)?;
        }
    }

    let (pairs, label) = if function == TestFunction::Identity {
        (half_length_pairs(&reports), "| |sum| - |I|/2 |")
    } else {
        let positive: Vec<_> = grid_pairs(&reports).into_iter().filter(|p| p.1 > 0.0).collect();
        (positive, "|root sum - grid sum|")
    };
    if function == TestFunction::Identity && reports.iter().all(|r| r.parity == Parity::Odd) {
        eprintln!("warning: no degree has an even number of roots in the interval; chart omitted");
    }
    match fit_slope(&pairs) {
        Ok(fit) => {
            write_fit(cfg, "sign_sum_fit.csv", &fit)?;
            let title = format!("alternating sum deviation, f = {function}");
            chart(cfg, "sign_sum.svg", &ChartSpec::with_fit(&title, label, "deviation", &fit))?;
            println!("fit {}", fit.summary());
            if let Some(window) = expect_slope {
                checks.add("slope", within(fit.slope, window), format!("{} in {window:?}", num(fit.slope)));
            }
        }
        Err(e) => {
            eprintln!("warning: no rate fit: {e}");
            if expect_slope.is_some() {
                checks.add("slope", false, e.to_string());
            }
        }
    }
    Ok(())
}

pub fn contour(
    cfg: &RunConfig,
    list: &[usize],
    interval: Interval<f64>,
    mode: CenterMode,
    radius: Option<f64>,
    checks: &mut Checks,
) -> Result<()> {
    for n in degrees(list, MAX_DEGREE)? {
        let roots = find_roots::<f64>(n)?;
        let spec = match radius {
            Some(r) => build_contour_with_radius(&roots, interval, mode, r)?,
            None => build_contour(&roots, interval, mode)?,
        };
        if spec.failovers() > 0 {
            eprintln!("note: n={n}: {} circles re-centred on their root", spec.failovers());
        }
        let rep = integrate_contour(&spec)?;
        match cfg.format {
            Format::Csv => {
                cfg.write_with(&format!("contour_n{n}.csv"), |w| Ok(rep.write_csv(w)?))?;
            }
            Format::Json => {
                cfg.write_json(&format!("contour_n{n}.json"), &rep)?;
            }
        }
        checks.add(
            format!("contour n={n}"),
            rep.passes(1e-8),
            format!(
                "Re {} vs root sum {}, |Im| {}, alpha {}",
                num(rep.integral_value.re),
                num(rep.root_sum),
                num(rep.imag_residual),
                num(rep.alpha)
            ),
        );
    }
    Ok(())
}

const LAPLACE_WINDOWS: [(f64, f64); 3] = [(-1.7, -1.3), (-0.7, -0.3), (0.3, 0.7)];

pub fn laplace(
    cfg: &RunConfig,
    list: &[usize],
    epsilon: f64,
    stieltjes: bool,
    thetas: &[f64],
    checks: &mut Checks,
) -> Result<()> {
    let degs = degrees(list, MAX_DEGREE)?;
    let quad = if stieltjes { Some(StieltjesQuadrature::<f64>::new()?) } else { None };
    let profiles: Vec<_> = degs
        .par_iter()
        .map(|&n| {
            let mut p = error_profile(n, epsilon, SUP_GRID_POINTS)?;
            if let Some(q) = &quad {
                if epsilon >= STIELTJES_MIN_EPSILON && n.get() >= 2 {
                    p.attach_stieltjes(q)?;
                }
            }
            Ok(p)
        })
        .collect::<signeq::Result<_>>()?;
    for p in &profiles {
        let name = format!("laplace_n{}", p.n);
        match cfg.format {
            Format::Csv => cfg.write_with(&format!("{name}.csv"), |w| Ok(p.write_csv(w)?))?,
            Format::Json => cfg.write_json(&format!("{name}.json"), p)?,
        };
    }

    if degs.len() >= MIN_RATE_POINTS {
        let sweep = order_sweep(&degs, epsilon)?;
        let fits = [
            ("E", "max |E|", &sweep.e_fit),
            ("E_prime", "max |E'|", &sweep.e_prime_fit),
            ("A_prime", "max |A'|", &sweep.a_prime_fit),
        ];
        for ((key, label, fit), window) in fits.iter().zip(LAPLACE_WINDOWS) {
            write_fit(cfg, &format!("laplace_{key}_fit.csv"), fit)?;
            let title = format!("Laplace formula, {label} on [{epsilon}, pi - {epsilon}]");
            chart(cfg, &format!("laplace_{key}.svg"), &ChartSpec::with_fit(&title, label, label, fit))?;
            checks.add(format!("slope {label}"), within(fit.slope, window), format!("{} in {window:?}", num(fit.slope)));
        }
    } else {
        eprintln!("note: rate fits need at least {MIN_RATE_POINTS} degrees; charts omitted");
    }

    if let Some(q) = &quad {
        let rows: Vec<_> = degs
            .iter()
            .filter(|n| n.get() >= 2)
            .flat_map(|&n| thetas.iter().map(move |&t| (n, t)))
            .map(|(n, t)| compare_stieltjes(q, n, t))
            .collect::<signeq::Result<_>>()?;
        let v = stieltjes_verdict(&rows);
        let flags = format!(
            "agrees={} constant_ratio={} convention_discrepancy={} mean_ratio={} min_ratio={} max_ratio={} max_corrected_rel_error={}",
            v.agrees,
            v.constant_ratio,
            v.convention_discrepancy,
            num(v.mean_ratio),
            num(v.min_ratio),
            num(v.max_ratio),
            num(v.max_corrected_rel_error)
        );
        match cfg.format {
            Format::Csv => {
                cfg.write_with("stieltjes.csv", |buf| {
                    writeln!(buf, "# {flags}")?;
                    let mut w = csv_writer(buf);
                    w.write_record([
                        "n", "theta", "remainder", "direct", "ratio", "main_term_gap", "corrected_rel_error",
                    ])?;
                    for r in &rows {
                        w.write_record([
                            r.n.to_string(),
                            num(r.theta),
                            num(r.remainder),
                            num(r.direct),
                            num(r.ratio),
                            num(r.main_term_gap),
                            num(r.corrected_rel_error),
                        ])?;
                    }
                    w.flush()?;
                    Ok(())
                })?;
            }
            Format::Json => {
                #[derive(Serialize)]
                struct Out<'a> {
                    comparisons: &'a [signeq::StieltjesComparison64],
                    verdict: &'a signeq::asymptotics::StieltjesVerdict<f64>,
                }
                cfg.write_json("stieltjes.json", &Out { comparisons: &rows, verdict: &v })?;
            }
        }
        checks.add("stieltjes", v.passes(), flags);
    }
    Ok(())
}

/// Default angles for the Stieltjes comparison.
pub fn default_thetas() -> Vec<f64> {
    vec![FRAC_PI_4, FRAC_PI_3, FRAC_PI_2 - 0.1]
}

fn monte_carlo_zonal(n: Degree, samples: usize, seed: u64) -> SphereSymmetryReport<f64> {
    // Area measure on the sphere is uniform in z = cos θ.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n.get() as u64);
    let pos = (0..samples)
        .filter(|_| legendre_recurrence(n.get(), rng.gen_range(-1.0..1.0)) > 0.0)
        .count();
    let total = 4.0 * PI;
    let vp = total * pos as f64 / samples as f64;
    SphereSymmetryReport::from_volumes(BasisFunction::zonal(n), vp, total - vp, AreaMethod::MonteCarlo)
}

pub fn sphere(
    cfg: &RunConfig,
    list: &[usize],
    m: usize,
    azimuthal: Option<Azimuthal>,
    samples: usize,
    checks: &mut Checks,
) -> Result<()> {
    let degs = degrees(list, MAX_DEGREE)?;
    let azimuthal = match (m, azimuthal) {
        (0, _) => Azimuthal::None,
        (_, Some(a)) => a,
        (_, None) => Azimuthal::Cosine,
    };
    let per_degree: Vec<Vec<SphereSymmetryReport<f64>>> = degs
        .par_iter()
        .map(|&n| -> Result<_> {
            let f = BasisFunction::new(n, m, azimuthal)?;
            if m == 0 {
                let mut v = vec![zonal_band_areas(&find_roots::<f64>(n)?)];
                if samples > 0 {
                    v.push(monte_carlo_zonal(n, samples, cfg.seed));
                }
                Ok(v)
            } else {
                let r = azimuthal_ratio::<f64>(f)?;
                Ok(vec![r.analytic, r.quadrature])
            }
        })
        .collect::<Result<_>>()?;
    let reports: Vec<_> = per_degree.into_iter().flatten().collect();

    if reports.len() == 1 || cfg.format == Format::Json {
        cfg.write_json("sphere.json", &reports)?;
    }
    if cfg.format == Format::Csv {
        cfg.write_with("sphere.csv", |w| Ok(write_reports_csv(&reports, w)?))?;
    }
    for r in &reports {
        println!(
            "n={} m={} {}: vol_pos={} vol_neg={} ratio={}",
            r.function.n,
            r.function.m,
            r.method.as_str(),
            num(r.vol_pos),
            num(r.vol_neg),
            num(r.ratio)
        );
    }

    let exact: Vec<_> = reports.iter().filter(|r| r.method != AreaMethod::MonteCarlo).collect();
    let area = exact.iter().map(|r| r.area_defect()).fold(0.0, f64::max);
    checks.add("area conservation", area <= 1e-9, format!("max |vol_pos + vol_neg - 4 pi| {}", num(area)));
    let df = exact.iter().map(|r| r.df_ratio_bound).fold(0.0, f64::max);
    checks.add("ratio bound", df <= 2.0, format!("max(ratio, 1/ratio) {}", num(df)));
    let odd = exact
        .iter()
        .filter(|r| r.function.m == 0 && r.function.n.get() % 2 == 1)
        .map(|r| (r.ratio - 1.0).abs())
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))));
    if let Some(dev) = odd {
        checks.add("odd degrees", dev <= 1e-12, format!("max |ratio - 1| {}", num(dev)));
    }
    if m > 0 {
        let dev = exact
            .iter()
            .filter(|r| r.method == AreaMethod::Quadrature)
            .map(|r| (r.ratio - 1.0).abs())
            .fold(0.0, f64::max);
        checks.add("azimuthal quadrature", dev <= 1e-3, format!("max |ratio - 1| {}", num(dev)));
    }

    if m == 0 {
        let pairs: Vec<(usize, f64)> = exact
            .iter()
            .filter(|r| r.function.n.get() % 2 == 0)
            .map(|r| (r.function.n.get(), (r.ratio - 1.0).abs()))
            .collect();
        if pairs.len() >= 2 {
            match symmetry_trend(&pairs) {
                SymmetryTrend::Fitted { fit } => {
                    write_fit(cfg, "sphere_fit.csv", &fit)?;
                    let spec = ChartSpec::with_fit("zonal area ratio, even degrees", "|ratio - 1|", "|ratio - 1|", &fit);
                    chart(cfg, "sphere_sweep.svg", &spec)?;
                    println!("fit {}", fit.summary());
                }
                SymmetryTrend::ExactSymmetry => println!("trend: exact symmetry"),
                SymmetryTrend::TooFewDegrees => eprintln!("note: too few degrees for a trend"),
            }
        }
    }
    Ok(())
}

/// Largest degree accepted by `riemann`; the sum needs no roots.
pub const RIEMANN_LIMIT: usize = 10_000_000;

pub fn riemann(cfg: &RunConfig, list: &[usize], checks: &mut Checks) -> Result<()> {
    let degs = degrees(list, RIEMANN_LIMIT)?;
    let sums: Vec<(usize, f64)> = degs.par_iter().map(|&n| (n.get(), riemann_grid_sum(n))).collect();
    #[derive(Serialize)]
    struct Row {
        n: usize,
        sum: f64,
        gap: f64,
        bound: f64,
        applies: bool,
    }
    let rows: Vec<Row> = sums
        .iter()
        .map(|&(n, s)| Row { n, sum: s, gap: (s + 1.0).abs(), bound: 3.0 / n as f64, applies: n % 2 == 0 })
        .collect();
    match cfg.format {
        Format::Csv => {
            cfg.write_with("riemann.csv", |buf| {
                let mut w = csv_writer(buf);
                w.write_record(["n", "sum", "gap", "bound", "applies"])?;
                for r in &rows {
                    w.write_record([r.n.to_string(), num(r.sum), num(r.gap), num(r.bound), r.applies.to_string()])?;
                }
                w.flush()?;
                Ok(())
            })?;
        }
        Format::Json => {
            cfg.write_json("riemann.json", &rows)?;
        }
    }
    let even: Vec<&Row> = rows.iter().filter(|r| r.applies).collect();
    if even.len() < rows.len() {
        eprintln!("note: odd degrees sum to exactly zero and are not checked");
    }
    for r in &even {
        checks.add(format!("riemann n={}", r.n), r.gap <= r.bound, format!("|sum + 1| {} <= {}", num(r.gap), num(r.bound)));
    }
    let pairs: Vec<(usize, f64)> = even.iter().filter(|r| r.gap > 0.0).map(|r| (r.n, r.gap)).collect();
    if let Ok(fit) = fit_rate(&pairs).or_else(|_| fit_slope(&pairs)) {
        write_fit(cfg, "riemann_fit.csv", &fit)?;
        chart(cfg, "riemann.svg", &ChartSpec::with_fit("Riemann grid sum", "|sum + 1|", "|sum + 1|", &fit))?;
    }
    Ok(())
}
