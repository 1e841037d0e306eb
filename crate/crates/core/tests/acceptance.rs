//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sos_admm::admm::{solve, RhoAdaptation, SolverOptions, SolverState, Status};
use sos_admm::bench::{
    full_quadratic_template, gen_random_polymin, gen_random_stable_system, run_lyapunov,
    run_polymin, run_sos,
};
use sos_admm::cones::{project_product, ConeSpec};
use sos_admm::conic::{ConicProgram, RowData, VarLayout};
use sos_admm::oracle::univariate_min;
use sos_admm::poly::{binomial, monomial_basis, parse_polynomial, MultiIndex, Polynomial};
use sos_admm::sos::{
    compile_lyapunov, compile_polymin, compile_sos_feasibility, compile_sos_program,
    quadratic_template, RationalField, SosConstraint, SosProgram, DEFAULT_LYAPUNOV_EPS,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn poly(text: &str, n: usize) -> Polynomial {
    parse_polynomial(text, Some(n)).expect("test polynomial parses")
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `(AAᵀ)_{αα}` by brute force over all basis pairs.
fn pair_count(n: usize, d: usize, alpha: &MultiIndex) -> usize {
    let basis = monomial_basis(n, d).unwrap();
    let e = basis.entries();
    e.iter()
        .flat_map(|b| e.iter().map(move |g| b.add(g)))
        .filter(|s| s == alpha)
        .count()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for n in 1..=4 {
        for d in 1..=3 {
            let cp = compile_sos_feasibility(&Polynomial::zero(n), d).unwrap();
            let g = cp.gram_of_rows();
            let support = monomial_basis(n, 2 * d).unwrap();
            for (i, row) in g.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    let want = if i == j {
                        pair_count(n, d, support.get(i)) as f64
                    } else {
                        0.0
                    };
                    if v != want {
                        return outcome(
                            false,
                            format!("n={n} 2d={}: (AAᵀ)[{i}][{j}] = {v}, expected {want}", 2 * d),
                        );
                    }
                }
            }
            checked += 1;
        }
    }
    let t = start.elapsed().as_secs_f64();
    outcome(t < 5.0, format!("{checked} (n, 2d) cases exactly diagonal with n_α, {t:.2} s"))
}

/// Three significant figures, truncated: `1/70 = 0.0142857` gives `1.42e-2`.
fn truncate_3sf(x: f64) -> String {
    let exp = x.log10().floor() as i32;
    let mantissa = x / 10f64.powi(exp);
    let digits = ((mantissa * 100.0) + 1e-9).floor() / 100.0;
    format!("{digits:.2}e{exp}")
}

fn criterion_2() -> Outcome {
    let printed = [(4, "1.42e-2"), (6, "4.76e-3"), (8, "2.02e-3"), (10, "9.99e-4")];
    let mut lines = Vec::new();
    for (n, want) in printed {
        let cp = compile_sos_feasibility(&Polynomial::zero(n), 2).unwrap();
        let side = binomial(n + 2, 2);
        let m = binomial(n + 4, 4);
        let density = cp.density();
        let exact = 1.0 / m as f64;
        let got = truncate_3sf(density);
        if cp.nnz() != side * side || (density - exact).abs() > 1e-15 * exact || got != want {
            return outcome(
                false,
                format!("n={n}: nnz={} (N²={}), density={density:e}, shown {got} vs {want}", cp.nnz(), side * side),
            );
        }
        lines.push(format!("n={n}:{got}"));
    }
    outcome(true, format!("nnz = N², density = 1/m; {}", lines.join(" ")))
}

fn criterion_3() -> Outcome {
    let table = [
        (2, 6, 14),
        (4, 15, 69),
        (6, 28, 209),
        (8, 45, 494),
        (10, 66, 1000),
        (12, 91, 1819),
        (14, 120, 3059),
        (16, 153, 4844),
        (18, 190, 7314),
        (20, 231, 10625),
    ];
    for (n, side, m_table) in table {
        let p = gen_random_polymin(n, 2, n as u64).unwrap();
        let cp = compile_sos_program(&compile_polymin(&p).unwrap()).unwrap();
        let sides = cp.psd_sides();
        if sides != vec![side] || cp.num_rows() != m_table + 1 {
            return outcome(
                false,
                format!("n={n}: N={sides:?} m={} (expected N={side}, m={})", cp.num_rows(), m_table + 1),
            );
        }
    }
    outcome(true, "N exact and m = table + 1 for n = 2..20")
}

fn criterion_4() -> Outcome {
    let cases = [
        ("x1^2 + 2*x1 + 1", 1),
        ("x1^4 - 3*x1^2 + 2", 1),
        ("(x1^2 + x2^2 - 1)^2", 2),
    ];
    let opts = SolverOptions::default();
    let mut pass = true;
    let mut lines = Vec::new();
    for (text, n) in cases {
        let p = poly(text, n);
        let truth = if n == 1 { univariate_min(&p).unwrap() } else { 0.0 };
        let run = run_polymin(text, &p, &opts).unwrap();
        let r = &run.report;
        let ok = r.status == Status::Solved
            && (r.objective - truth).abs() <= 1e-3
            && r.iters <= 2000
            && r.time_s <= 5.0;
        pass &= ok;
        lines.push(format!(
            "[{}] {text}: γ={:.5} (min {truth:.5}, err {:.1e}) {:?} {} it",
            if ok { "ok" } else { "x" },
            r.objective,
            r.objective - truth,
            r.status,
            r.iters
        ));
    }
    outcome(pass, lines.join("; "))
}

fn sampled_min(p: &Polynomial, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.num_vars();
    let mut point = vec![0.0; n];
    let mut best = f64::INFINITY;
    for _ in 0..samples {
        for x in point.iter_mut() {
            *x = rng.random_range(-3.0..=3.0);
        }
        best = best.min(p.eval(&point).unwrap());
    }
    best
}

fn criterion_5() -> Outcome {
    // The criterion bounds total wall time rather than iterations.
    let opts = SolverOptions {
        max_iter: 20_000,
        ..SolverOptions::default()
    };
    let start = Instant::now();
    let mut pass = true;
    let mut lines = Vec::new();
    for seed in 0..5 {
        let p = gen_random_polymin(6, 2, seed).unwrap();
        let run = run_polymin("random", &p, &opts).unwrap();
        let r = &run.report;
        let v = r.verification.as_ref().unwrap();
        let tol = 1e-3 * (1.0 + p.max_abs_coeff());
        let floor = sampled_min(&p, 100_000, 1000 + seed);
        let ok = r.status == Status::Solved
            && r.objective <= floor
            && v.max_coeff_residual <= tol
            && v.min_gram_eig >= -1e-5;
        pass &= ok;
        lines.push(format!(
            "seed {seed}: {:?} {} it γ={:.4} ≤ {floor:.4} res {:.1e}/{tol:.1e} eig {:.1e}",
            r.status, r.iters, r.objective, v.max_coeff_residual, v.min_gram_eig
        ));
    }
    let t = start.elapsed().as_secs_f64();
    outcome(pass && t <= 60.0, format!("{} | {t:.1} s", lines.join("; ")))
}

fn demo_field() -> RationalField {
    RationalField::new(
        vec![
            poly("-x1^3 - x1*x3^2", 3),
            poly("-x2 - x1^2*x2", 3),
            poly("(-x3 + 3*x1^2*x3)*(x3^2 + 1) - 3*x3", 3),
        ],
        vec![
            Polynomial::constant(3, 1.0),
            Polynomial::constant(3, 1.0),
            poly("x3^2 + 1", 3),
        ],
    )
    .unwrap()
}

fn criterion_6() -> Outcome {
    let lr = run_lyapunov(
        "demo",
        &demo_field(),
        &quadratic_template(3, true),
        f64::INFINITY,
        DEFAULT_LYAPUNOV_EPS,
        1.0,
        10_000,
        6,
        &SolverOptions::default(),
    )
    .unwrap();
    let r = &lr.run.report;
    let s = r.verification.as_ref().unwrap().lyapunov.unwrap();
    let pass = r.status == Status::Solved && s.min_v > 0.0 && s.max_vdot <= 1e-6;
    outcome(
        pass,
        format!(
            "{:?} in {} it, V = {}, min V = {:.2e}, max V̇ = {:.2e}",
            r.status,
            r.iters,
            lr.lyapunov.unwrap(),
            s.min_v,
            s.max_vdot
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut pass = true;
    let mut solved = 0;
    let mut lines = Vec::new();
    for n in [4, 6] {
        for seed in 0..3 {
            let f = RationalField::polynomial(gen_random_stable_system(n, seed).unwrap());
            let lr = run_lyapunov(
                "random",
                &f,
                &full_quadratic_template(n),
                0.1,
                DEFAULT_LYAPUNOV_EPS,
                0.1,
                10_000,
                seed,
                &SolverOptions::default(),
            )
            .unwrap();
            let r = &lr.run.report;
            if r.status == Status::Solved {
                solved += 1;
                let s = r.verification.as_ref().unwrap().lyapunov.unwrap();
                let ok = s.min_v > 0.0 && s.max_vdot <= 1e-6;
                pass &= ok;
                lines.push(format!("n={n} s={seed}: minV {:.1e} maxV̇ {:.1e}", s.min_v, s.max_vdot));
            } else {
                lines.push(format!("n={n} s={seed}: {:?}", r.status));
            }
        }
    }
    outcome(pass, format!("{solved}/6 solved; {}", lines.join("; ")))
}

// Random conic programs with a known KKT point for the solver checks.

struct Instance {
    prog: ConicProgram,
    x_star: Vec<f64>,
    s_star: Vec<f64>,
    lambda: Vec<f64>,
}

fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    m.qr().q()
}

/// A point of the cone and a complementary point of its dual.
fn complementary_pair(cone: &ConeSpec, rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    match *cone {
        ConeSpec::Free(k) => ((0..k).map(|_| rng.random_range(-1.0..1.0)).collect(), vec![0.0; k]),
        ConeSpec::NonNeg(k) => (0..k)
            .map(|_| {
                let v = rng.random_range(0.1..1.0);
                if rng.random_bool(0.5) {
                    (v, 0.0)
                } else {
                    (0.0, v)
                }
            })
            .unzip(),
        ConeSpec::SecondOrder(k) => {
            let w: Vec<f64> = (0..k - 1).map(|_| rng.random_range(-1.0..1.0)).collect();
            let t = w.iter().map(|v| v * v).sum::<f64>().sqrt();
            let a = rng.random_range(0.1..1.0);
            let mut x = vec![t];
            x.extend(&w);
            let mut s = vec![a * t];
            s.extend(w.iter().map(|v| -a * v));
            (x, s)
        }
        ConeSpec::Psd(n) => {
            let q = random_orthogonal(n, rng);
            let split = rng.random_range(0..=n);
            let mut x = DMatrix::zeros(n, n);
            let mut s = DMatrix::zeros(n, n);
            for k in 0..n {
                let col = q.column(k);
                let lam = rng.random_range(0.1..1.0);
                if k < split {
                    x.ger(lam, &col, &col, 1.0);
                } else {
                    s.ger(lam, &col, &col, 1.0);
                }
            }
            let x = (&x + x.transpose()) * 0.5;
            let s = (&s + s.transpose()) * 0.5;
            (x.as_slice().to_vec(), s.as_slice().to_vec())
        }
    }
}

fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    let mut cones = Vec::new();
    for _ in 0..rng.random_range(1..=4) {
        cones.push(match rng.random_range(0..4) {
            0 => ConeSpec::Free(rng.random_range(1..4)),
            1 => ConeSpec::NonNeg(rng.random_range(1..4)),
            2 => ConeSpec::SecondOrder(rng.random_range(2..5)),
            _ => ConeSpec::Psd(rng.random_range(1..4)),
        });
    }
    let mut x_star = Vec::new();
    let mut s_star = Vec::new();
    for c in &cones {
        let (x, s) = complementary_pair(c, rng);
        x_star.extend(x);
        s_star.extend(s);
    }
    let nv = x_star.len();
    let m = rng.random_range(1..=8);
    let rows: Vec<RowData> = (0..m)
        .map(|_| {
            let k = rng.random_range(1..=nv.min(5));
            let pairs = (0..k)
                .map(|_| {
                    let mag = rng.random_range(0.5..2.0);
                    (rng.random_range(0..nv), if rng.random_bool(0.5) { mag } else { -mag })
                })
                .collect();
            RowData::from_pairs(pairs)
        })
        .filter(|r| !r.is_empty())
        .collect();
    let lambda: Vec<f64> = rows.iter().map(|_| rng.random_range(-1.0..1.0)).collect();
    let b = rows.iter().map(|r| r.dot(&x_star)).collect();
    let mut c = s_star.clone();
    for (row, l) in rows.iter().zip(&lambda) {
        for (&j, &a) in row.indices.iter().zip(&row.values) {
            c[j] += l * a;
        }
    }
    Instance {
        prog: ConicProgram {
            num_vars: nv,
            rows,
            b,
            c,
            cones,
            layout: VarLayout::default(),
        },
        x_star,
        s_star,
        lambda,
    }
}

fn random_state(prog: &ConicProgram, rng: &mut ChaCha8Rng) -> SolverState {
    let mut s = SolverState::init(prog, &SolverOptions::default()).unwrap();
    let mut fill = |v: &mut Vec<f64>| v.iter_mut().for_each(|x| *x = rng.random_range(-1.0..1.0));
    fill(&mut s.x);
    fill(&mut s.u);
    fill(&mut s.z);
    fill(&mut s.mu);
    fill(&mut s.xi);
    s.rho = rng.random_range(0.1..10.0);
    s
}

/// The x-subproblem objective and its gradient.
fn x_objective(s: &SolverState, prog: &ConicProgram, x: &[f64]) -> (f64, Vec<f64>) {
    let rho = s.rho;
    let mut f: f64 = prog.c.iter().zip(x).map(|(c, x)| c * x).sum();
    let mut g = prog.c.clone();
    for (i, row) in prog.rows.iter().enumerate() {
        for (k, &j) in row.indices.iter().enumerate() {
            let r = x[j] - s.z_row(i)[k] - s.mu_row(i)[k] / rho;
            f += 0.5 * rho * r * r;
            g[j] += rho * r;
        }
    }
    for j in 0..x.len() {
        let r = x[j] - s.u[j] - s.xi[j] / rho;
        f += 0.5 * rho * r * r;
        g[j] += rho * r;
    }
    (f, g)
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = [0.0f64; 6];
    let mut fails = Vec::new();
    for inst_no in 0..100 {
        let inst = random_instance(&mut rng);
        let prog = &inst.prog;
        let state = random_state(prog, &mut rng);

        // Gradient zero and perturbation optimality of the x-update.
        let x = state.x_update(prog);
        let (f0, grad) = x_objective(&state, prog, &x);
        let g_rel = inf_norm(&grad) / (1.0 + inf_norm(&prog.c));
        worst[0] = worst[0].max(g_rel);
        for _ in 0..5 {
            let mut d: Vec<f64> = (0..x.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let nd = d.iter().map(|v| v * v).sum::<f64>().sqrt();
            d.iter_mut().for_each(|v| *v *= 1e-3 / nd);
            let xp: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + b).collect();
            if x_objective(&state, prog, &xp).0 < f0 - 1e-12 * f0.abs().max(1.0) {
                fails.push(format!("instance {inst_no}: x-update perturbation decreased objective"));
            }
        }

        // Row feasibility and cone membership along a short run.
        let mut run = state.clone();
        for _ in 0..20 {
            run.step(prog);
            for (i, row) in prog.rows.iter().enumerate() {
                let az: f64 = row.values.iter().zip(run.z_row(i)).map(|(a, z)| a * z).sum();
                let viol = (az - prog.b[i]).abs() / (1.0 + prog.b[i].abs());
                worst[1] = worst[1].max(viol);
            }
            let pu = project_product(&run.u, &prog.cones).unwrap();
            let dev = inf_norm(&pu.iter().zip(&run.u).map(|(a, b)| a - b).collect::<Vec<_>>());
            worst[2] = worst[2].max(dev);
        }

        // Idempotence and nonexpansiveness of the product projection.
        let v1: Vec<f64> = (0..x.len()).map(|_| rng.random_range(-2.0..2.0)).collect();
        let v2: Vec<f64> = (0..x.len()).map(|_| rng.random_range(-2.0..2.0)).collect();
        let p1 = project_product(&v1, &prog.cones).unwrap();
        let p2 = project_product(&v2, &prog.cones).unwrap();
        let pp = project_product(&p1, &prog.cones).unwrap();
        let idem = inf_norm(&pp.iter().zip(&p1).map(|(a, b)| a - b).collect::<Vec<_>>());
        worst[3] = worst[3].max(idem);
        let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
        worst[4] = worst[4].max(dist(&p1, &p2) - dist(&v1, &v2));

        // Fixed point: KKT iterates with consistent multipliers stay put.
        let mut fp = SolverState::init(prog, &SolverOptions::default()).unwrap();
        fp.rho = rng.random_range(0.1..10.0);
        fp.x = inst.x_star.clone();
        fp.u = inst.x_star.clone();
        fp.xi = inst.s_star.clone();
        for (i, row) in prog.rows.iter().enumerate() {
            let r = fp.row_range(i);
            for (k, &j) in row.indices.iter().enumerate() {
                fp.z[r.start + k] = inst.x_star[j];
                fp.mu[r.start + k] = inst.lambda[i] * row.values[k];
            }
        }
        for _ in 0..10 {
            let res = fp.step(prog);
            worst[5] = worst[5].max(res.max());
        }
    }
    let t = start.elapsed().as_secs_f64();
    let limits = [1e-9, 1e-10, 1e-8, 1e-8, 1e-8, 1e-8];
    let names = ["grad", "row", "cone", "idem", "nonexp", "fixed"];
    let mut pass = fails.is_empty() && t < 30.0;
    let mut parts = Vec::new();
    for k in 0..6 {
        pass &= worst[k] <= limits[k];
        parts.push(format!("{} {:.1e}", names[k], worst[k]));
    }
    if let Some(f) = fails.first() {
        parts.push(f.clone());
    }
    outcome(pass, format!("100 instances: {}, {t:.2} s", parts.join(", ")))
}

fn criterion_9() -> Outcome {
    let mut prog = SosProgram::feasibility(2);
    for (quartic, quadratic) in [(0, 1), (1, 0)] {
        let mut c = SosConstraint::from_polynomial(&poly("x1 + 1", 1), 2);
        c.add_param(MultiIndex::new(vec![4]), quartic, 1.0);
        c.add_param(MultiIndex::new(vec![2]), quadratic, 1.0);
        prog.constraints.push(c);
    }
    let cp = compile_sos_program(&prog).unwrap();
    let g = cp.gram_of_rows();
    let off = (0..g.len())
        .flat_map(|i| (0..g.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && g[i][j] != 0.0)
        .count();
    let run = run_sos("shared a, b", &prog, &SolverOptions::default()).unwrap();
    let r = &run.report;
    let pass = off > 0 && r.status == Status::Solved && r.residuals.max() <= 1e-4;
    outcome(
        pass,
        format!(
            "{off} off-diagonal nonzeros in AAᵀ; {:?} in {} it, max residual {:.1e}, a={:.3} b={:.3}",
            r.status,
            r.iters,
            r.residuals.max(),
            run.certificate.as_ref().unwrap().params[0],
            run.certificate.as_ref().unwrap().params[1]
        ),
    )
}

fn criterion_10() -> Outcome {
    let f = RationalField::polynomial(vec![poly("x1", 1)]);
    let lp = compile_lyapunov(&f, &quadratic_template(1, true), f64::INFINITY, DEFAULT_LYAPUNOV_EPS)
        .unwrap();
    let cp = compile_sos_program(&lp.program).unwrap();
    let opts = SolverOptions::default();
    let sol = solve(&cp, &opts).unwrap();
    let adapt: RhoAdaptation = opts.adapt.unwrap();
    outcome(
        sol.status == Status::MaxIters && sol.iterations == opts.max_iter,
        format!(
            "{:?} after {} it (residuals {:.1e}/{:.1e}/{:.1e}, ρ={} within [{}, {}])",
            sol.status,
            sol.iterations,
            sol.primal_residual,
            sol.dual_residual,
            sol.constraint_residual,
            sol.rho,
            adapt.rho_min,
            adapt.rho_max
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 orthogonality of feasibility rows", criterion_1),
        ("2 density of A", criterion_2),
        ("3 polymin dimensions", criterion_3),
        ("4 polymin correctness", criterion_4),
        ("5 random polymin soundness", criterion_5),
        ("6 rational demo system", criterion_6),
        ("7 random stable systems", criterion_7),
        ("8 ADMM subproblem exactness", criterion_8),
        ("9 non-orthogonal program", criterion_9),
        ("10 no false certificate", criterion_10),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} criterion {name} ({:.2} s): {}",
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
