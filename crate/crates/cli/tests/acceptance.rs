//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and fails if any fails.

use std::f64::consts::PI;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use amoeba_core::amoeba::{
    area_ratio, fiber_solutions, max_fiber_count, rasterize, sample_in_points, Window,
};
use amoeba_core::forge::{known_harnack, search_harnack, SearchOptions};
use amoeba_core::poly::{parse_polynomial, real_up_to_constant, LaurentPolynomial, NewtonPolygon, Unimodular};
use amoeba_core::real_locus::{default_window, harnack_verdict, trace_topology, Verdict};
use amoeba_core::report::{boundary_identity, maximality_report, Consistency, Profile};
use amoeba_core::ronkin::{branch_hessian, monge_ampere_mass, ronkin_sample};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn p(s: &str) -> LaurentPolynomial {
    parse_polynomial(s).unwrap()
}

fn line_area_cli() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_amoeba"))
        .args(["area", "-p", "1+x+y"])
        .output()
        .map_err(|e| e.to_string())?;
    let took = start.elapsed();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let area = v["area"].as_f64().ok_or("no area in output")?;
    let target = PI * PI / 2.0;
    check(
        out.status.success() && (area - target).abs() <= 0.02 * target && took <= Duration::from_secs(300),
        format!("area {area:.4} vs {target:.4}, {:.1}s", took.as_secs_f64()),
    )
}

fn reducible_collapse() -> Outcome {
    let f = p("(1+x)*(1+y)");
    let w = Window::square(5.0);
    let a = rasterize(&f, w, (512, 512)).map_err(|e| e.to_string())?.area_estimate;
    let b = rasterize(&f, w, (1024, 1024)).map_err(|e| e.to_string())?.area_estimate;
    check(a <= 0.4 && b < a, format!("area {a:.4} at 512², {b:.4} at 1024²"))
}

fn monge_ampere_masses() -> Outcome {
    let region = Window::square(8.0);
    let line = monge_ampere_mass(&p("1+x+y"), region, 128).map_err(|e| e.to_string())?;
    let square = known_harnack("square1").map_err(|e| e.to_string())?;
    let sq = monge_ampere_mass(&square, region, 128).map_err(|e| e.to_string())?;
    check(
        (line.mass - 0.5).abs() <= 0.05 * 0.5 && (sq.mass - 1.0).abs() <= 0.07,
        format!("line {:.4}, square1 {:.4}", line.mass, sq.mass),
    )
}

fn line_density() -> Outcome {
    let f = p("1+x+y");
    let pts = sample_in_points(&f, Window::square(2.0), 100, 0.1, 7);
    let target = 1.0 / (PI * PI);
    let dets: Vec<f64> = pts.iter().map(|&x| ronkin_sample(&f, x).det()).collect();
    let worst = dets.iter().map(|d| (d - target).abs()).fold(0.0, f64::max);
    check(
        pts.len() == 100 && worst <= 0.05,
        format!("{} points, max |det − 1/π²| = {worst:.2e}", pts.len()),
    )
}

fn frobenius(a: [[f64; 2]; 2]) -> f64 {
    a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

fn branch_structure() -> Outcome {
    let f = p("1+x+y");
    let pts = sample_in_points(&f, Window::square(2.0), 20, 0.1, 11);
    let (mut defect, mut det_dev, mut sum_dev) = (0.0f64, 0.0f64, 0.0f64);
    for x in &pts {
        let fiber = fiber_solutions(&f, *x, 1024).map_err(|e| e.to_string())?;
        let b = branch_hessian(&f, &fiber).map_err(|e| e.to_string())?;
        for t in &b.terms {
            defect = defect.max(t.symmetry_defect());
            det_dev = det_dev.max((t.det() - 1.0).abs());
        }
        let fd = ronkin_sample(&f, *x).hessian;
        let diff = [
            [b.sum[0][0] - fd[0][0], b.sum[0][1] - fd[0][1]],
            [b.sum[1][0] - fd[1][0], b.sum[1][1] - fd[1][1]],
        ];
        sum_dev = sum_dev.max(frobenius(diff) / frobenius(fd));
    }
    check(
        pts.len() == 20 && defect <= 1e-3 && det_dev <= 1e-2 && sum_dev <= 0.05,
        format!("symmetry defect {defect:.1e}, |det − 1| {det_dev:.1e}, sum vs FD {:.2}%", 100.0 * sum_dev),
    )
}

fn line_fibers() -> Outcome {
    let f = p("1+x+y");
    let pts = sample_in_points(&f, Window::square(3.0), 200, 1e-3, 3);
    let c = max_fiber_count(&f, &pts, 1024).map_err(|e| e.to_string())?;
    let all_even = c.counts.iter().all(|x| x.is_some_and(|n| n % 2 == 0));
    check(
        pts.len() == 200 && c.max_count == 2 && c.odd == 0 && all_even,
        format!("max {} over {} samples, {} re-sampled", c.max_count, pts.len(), c.resampled),
    )
}

fn line_harnack_and_boundary() -> Outcome {
    let f = p("1+x+y");
    let v = harnack_verdict(&f).map_err(|e| e.to_string())?;
    let w = default_window(&f);
    let raster = rasterize(&f, w, (256, 256)).map_err(|e| e.to_string())?;
    let locus = trace_topology(&f, w, 512).map_err(|e| e.to_string())?;
    let b = boundary_identity(&raster, locus.log_points()).ok_or("no outline or locus")?;
    check(
        v.verdict == Verdict::Harnack && v.components == 3 && b.distance <= 2,
        format!("{:?}, {} components, boundary distance {} cells", v.verdict, v.components, b.distance),
    )
}

fn existence_pipeline() -> Outcome {
    let mut found = Vec::new();
    for (verts, want) in [("(0,0),(1,0),(0,1)", 3), ("(0,0),(1,0),(0,1),(1,1)", 4), ("(0,0),(3,0),(0,3)", 10)] {
        let poly = NewtonPolygon::parse_vertices(verts).unwrap();
        let c = search_harnack(&poly, &SearchOptions::default()).map_err(|e| e.to_string())?;
        let stable = c.verdict.verdict == Verdict::Harnack && c.confirmed_at < c.t;
        if !stable || c.verdict.components != want {
            return Err(format!("{verts}: {} components, {:?}", c.verdict.components, c.verdict.verdict));
        }
        found.push(format!("{} (t = {}, {})", c.verdict.components, c.t, c.confirmed_at));
    }
    Ok(format!("components {}", found.join(", ")))
}

fn reality_gate() -> Outcome {
    let w = real_up_to_constant(&p("1+x+i*y"));
    let e = p("1+x+y+e^{i*pi/4}*x*y");
    let none = real_up_to_constant(&e).is_none();
    let r = maximality_report(&e, Profile::Default).map_err(|e| e.to_string())?;
    let ratio = r.area.ratio.unwrap_or(f64::NAN);
    check(
        w.is_some() && none && r.consistency == Consistency::ConsistentNonMaximal && ratio < 0.98,
        format!("witness {:?}, e^(iπ/4) real: {}, {:?}, ratio {ratio:.3}", w.map(|w| w.b2), !none, r.consistency),
    )
}

fn invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for (name, f) in [("line", p("1+x+y")), ("square1", known_harnack("square1").unwrap())] {
        let (base, _) = area_ratio(&f, 0.02).map_err(|e| e.to_string())?;
        let verdict = harnack_verdict(&f).map_err(|e| e.to_string())?.verdict;
        for _ in 0..10 {
            let m = Unimodular::random(&mut rng, 3);
            let c = |r: &mut ChaCha8Rng| Complex64::new(r.gen_range(0.2..5.0), 0.0);
            let (a, b1, b2) = (c(&mut rng), c(&mut rng), c(&mut rng));
            let g = f.apply_unimodular(&m).scale_variables(a, b1, b2);
            let (r, _) = area_ratio(&g, 0.02).map_err(|e| format!("{name} {:?}: {e}", m.matrix()))?;
            let v = harnack_verdict(&g).map_err(|e| e.to_string())?.verdict;
            if v != verdict {
                return Err(format!("{name} under {:?}: {v:?} instead of {verdict:?}", m.matrix()));
            }
            worst = worst.max((r - base).abs() / base);
        }
    }
    check(worst <= 0.03, format!("max ratio drift {:.2}%", 100.0 * worst))
}

fn cross_consistency() -> Outcome {
    let mut suite: Vec<(String, LaurentPolynomial)> = ["line", "square1", "d2", "d3"]
        .iter()
        .map(|n| (n.to_string(), known_harnack(n).unwrap()))
        .collect();
    suite.push(("(1+x)(1+y)".into(), p("(1+x)*(1+y)")));
    suite.push(("e^(iπ/4) square".into(), p("1+x+y+e^{i*pi/4}*x*y")));
    let mut lines = Vec::new();
    let mut bad = false;
    for (name, f) in suite {
        let r = maximality_report(&f, Profile::Default).map_err(|e| e.to_string())?;
        let ratio = r.area.ratio.unwrap_or(f64::NAN);
        let in_band = ratio > 0.9 && ratio < 0.95;
        bad |= in_band || matches!(r.consistency, Consistency::Inconsistent(_) | Consistency::Undecided(_));
        let tag = match r.consistency {
            Consistency::ConsistentMaximal => "maximal".to_string(),
            Consistency::ConsistentNonMaximal => "non-maximal".to_string(),
            c => format!("{c:?}"),
        };
        lines.push(format!("{name}: {tag} ({ratio:.3})"));
    }
    check(!bad, lines.join("; "))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("line area via CLI", line_area_cli),
        ("reducible collapse", reducible_collapse),
        ("Monge-Ampère mass", monge_ampere_masses),
        ("maximal density", line_density),
        ("branch Hessian structure", branch_structure),
        ("fiber count", line_fibers),
        ("Harnack verdict and boundary identity", line_harnack_and_boundary),
        ("existence pipeline", existence_pipeline),
        ("reality gate", reality_gate),
        ("invariance suite", invariance),
        ("cross-consistency", cross_consistency),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout().lock();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed.push(i + 1);
                ("FAIL", d)
            }
        };
        writeln!(
            out,
            "criterion {:>2} {tag}: {name}: {detail} [{:.1}s]",
            i + 1,
            start.elapsed().as_secs_f64()
        )
        .unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
