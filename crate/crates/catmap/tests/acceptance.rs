//! Acceptance checks: one PASS/FAIL line per criterion, with wall-clock budget.
//! Runs without the test harness so the report is always printed.

use std::collections::{BTreeSet, VecDeque};
use std::process::Command;
use std::time::{Duration, Instant};

use catmap::io::{load_csv, CsvOptions};
use catmap::MapOptions;
use catmap_core::dataset::{deduplicate, encode, Attribute, AttributeSchema, CategoricalTable, SubsetTable};
use catmap_core::distance::{build_matrix, distance, DissimilarityMatrix, DistanceMeasure};
use catmap_core::fracturedness::{component_fracturedness, edge_fracturedness, Fraction, Labeling};
use catmap_core::geometry::{delaunay, voronoi, Rect};
use catmap_core::pipeline::{build_map, compare_pipelines, QualityConfig};
use catmap_core::projection::{mds_project, reduce_overlap, Layout, MdsConfig, MdsInit, Method, Point};
use catmap_core::quality::{
    continuity, neighborhood_hit, normalized_stress, shepard_correlation, spearman, trustworthiness,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn titanic_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/titanic.csv")
}

fn titanic() -> SubsetTable {
    deduplicate(&load_csv(&titanic_path(), &CsvOptions::default()).unwrap())
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn dedup() -> Outcome {
    let table = load_csv(&titanic_path(), &CsvOptions::default()).map_err(|e| e.to_string())?;
    let s = deduplicate(&table);
    let sum: usize = s.subsets().iter().map(|x| x.count).sum();
    check(
        table.row_count() == 2201 && s.len() == 24 && sum == 2201,
        format!("{} rows -> {} subsets, counts sum to {sum}", table.row_count(), s.len()),
    )
}

fn random_schema(rng: &mut ChaCha8Rng) -> AttributeSchema {
    let attributes = (0..rng.random_range(2..=22))
        .map(|a| Attribute {
            name: format!("a{a}"),
            categories: (0..rng.random_range(2..=5)).map(|c| format!("c{c}")).collect(),
        })
        .collect();
    AttributeSchema::new(attributes).unwrap()
}

fn random_values(rng: &mut ChaCha8Rng, schema: &AttributeSchema) -> Vec<usize> {
    (0..schema.attribute_count()).map(|a| rng.random_range(0..schema.category_count(a))).collect()
}

fn distances() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut pairs = 0;
    for _ in 0..100 {
        let schema = random_schema(&mut rng);
        // ten items per schema: 45 pairs, 4500 in total
        let items: Vec<Vec<usize>> = (0..10).map(|_| random_values(&mut rng, &schema)).collect();
        let encoded: Vec<_> = items.iter().map(|v| encode(v, &schema).unwrap()).collect();
        let mut matrices = vec![Vec::new(); 5];
        for i in 0..10 {
            for j in i + 1..10 {
                pairs += 1;
                let hamming = items[i].iter().zip(&items[j]).filter(|(a, b)| a != b).count() as f64;
                let d: Vec<f64> = DistanceMeasure::ALL.iter().map(|&m| distance(&encoded[i], &encoded[j], m).unwrap()).collect();
                if d[0] != d[2] {
                    return Err(format!("dice {} != overlap {}", d[2], d[0]));
                }
                if d[3] != 2.0 * hamming {
                    return Err(format!("manhattan {} != 2 * hamming {hamming}", d[3]));
                }
                for (m, v) in matrices.iter_mut().zip(d) {
                    m.push(v);
                }
            }
        }
        if matrices[0].iter().all(|&v| v == matrices[0][0]) {
            continue;
        }
        for m in &matrices[1..] {
            let rho = spearman(&matrices[0], m).map_err(|e| e.to_string())?;
            if (rho - 1.0).abs() > 1e-12 {
                return Err(format!("rank correlation {rho}"));
            }
        }
    }
    check(pairs >= 1000, format!("{pairs} pairs: dice = overlap, manhattan = 2 hamming, rho = 1"))
}

fn procrustes(x: &[Point], y: &[Point]) -> f64 {
    let centre = |p: &[Point]| {
        let n = p.len() as f64;
        let c = p.iter().fold([0.0, 0.0], |a, q| [a[0] + q[0] / n, a[1] + q[1] / n]);
        p.iter().map(|q| [q[0] - c[0], q[1] - c[1]]).collect::<Vec<_>>()
    };
    let (x, y) = (centre(x), centre(y));
    let norm: f64 = y.iter().map(|q| q[0] * q[0] + q[1] * q[1]).sum();
    [1.0, -1.0]
        .iter()
        .map(|flip| {
            let xs: Vec<Point> = x.iter().map(|q| [q[0], flip * q[1]]).collect();
            let (a, b) = xs.iter().zip(&y).fold((0.0, 0.0), |(a, b), (p, q)| {
                (a + p[0] * q[0] + p[1] * q[1], b + p[0] * q[1] - p[1] * q[0])
            });
            let (s, c) = b.atan2(a).sin_cos();
            xs.iter()
                .zip(&y)
                .map(|(p, q)| (c * p[0] - s * p[1] - q[0]).powi(2) + (s * p[0] + c * p[1] - q[1]).powi(2))
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
        .sqrt()
        / norm.sqrt()
}

fn smacof() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for instance in 0..50 {
        let schema = random_schema(&mut rng);
        let rows: Vec<Vec<usize>> = (0..60).map(|_| random_values(&mut rng, &schema)).collect();
        let s = deduplicate(&CategoricalTable::new(schema, rows).unwrap());
        let d = build_matrix(&s, DistanceMeasure::ALL[instance % 5]).map_err(|e| e.to_string())?;
        let init = if instance % 2 == 0 { MdsInit::Classical } else { MdsInit::Random };
        let l = mds_project(&d, &MdsConfig { init, seed: instance as u64, ..MdsConfig::default() }).unwrap();
        if l.stress_history.windows(2).any(|w| w[1] > w[0]) {
            return Err(format!("stress rose on instance {instance}"));
        }
    }
    let (mut worst_ns, mut worst_fit) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let n = rng.random_range(4..40);
        let truth: Vec<Point> = (0..n).map(|_| [rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0)]).collect();
        let d = DissimilarityMatrix::euclidean(&truth);
        let l = mds_project(&d, &MdsConfig::default()).unwrap();
        worst_ns = worst_ns.max(normalized_stress(&d, &l.positions).unwrap());
        worst_fit = worst_fit.max(procrustes(&l.positions, &truth));
    }
    check(
        worst_ns < 1e-6 && worst_fit < 1e-6,
        format!("50 monotone runs; planar worst NS {worst_ns:.1e}, Procrustes {worst_fit:.1e}"),
    )
}

fn table_one() -> Outcome {
    let table = load_csv(&titanic_path(), &CsvOptions::default()).unwrap();
    let configs: Vec<QualityConfig> = ["mds:overlap", "mca"].iter().map(|c| c.parse().unwrap()).collect();
    let rows = compare_pipelines(&table, &configs, 7, 0).map_err(|e| e.to_string())?;
    let (mds, mca) = (&rows[0], &rows[1]);
    let targets = [
        ("TW", mds.tw, 0.86),
        ("CT", mds.ct, 0.84),
        ("SC", mds.sc, 0.76),
        ("NS", mds.ns, 0.07),
        ("Avg NH", mds.nh_mean, 0.68),
        ("Med NH", mds.nh_median, 0.74),
        ("MCA NS", mca.ns, 0.28),
    ];
    let mut misses = Vec::new();
    let mut detail = Vec::new();
    for (name, got, want) in targets {
        detail.push(format!("{name} {got:.3}/{want:.2}"));
        if (got - want).abs() > 0.08 {
            misses.push(format!("{name} {got:.3} outside {want:.2}±0.08"));
        }
    }
    if mds.ns >= mca.ns {
        misses.push(format!("NS(MDS) {:.3} not below NS(MCA) {:.3}", mds.ns, mca.ns));
    }
    if misses.is_empty() {
        Ok(detail.join(", "))
    } else {
        Err(format!("{}; measured {}", misses.join("; "), detail.join(", ")))
    }
}

fn rank(d: &[Vec<f64>], i: usize, j: usize) -> usize {
    1 + (0..d.len()).filter(|&l| l != i && l != j && (d[i][l] < d[i][j] || (d[i][l] == d[i][j] && l < j))).count()
}

fn tw_oracle(high: &[Vec<f64>], low: &[Vec<f64>], k: usize) -> f64 {
    let n = high.len();
    let mut sum = 0usize;
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            if rank(low, i, j) <= k && rank(high, i, j) > k {
                sum += rank(high, i, j) - k;
            }
        }
    }
    if sum == 0 {
        return 1.0;
    }
    let (n, k) = (n as f64, k as f64);
    let norm = if k < n / 2.0 { n * k * (2.0 * n - 3.0 * k - 1.0) } else { n * (n - k) * (n - k - 1.0) };
    1.0 - 2.0 * sum as f64 / norm
}

fn avg_ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|x| {
            let less = v.iter().filter(|y| *y < x).count() as f64;
            let equal = v.iter().filter(|y| *y == x).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

fn quality_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(4..=12);
        let coarse = rng.random_bool(0.5);
        let mut high = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = if coarse { f64::from(rng.random_range(1..4)) } else { rng.random_range(0.1..5.0) };
                high[i][j] = v;
                high[j][i] = v;
            }
        }
        let pos: Vec<Point> = (0..n)
            .map(|_| {
                if coarse {
                    [f64::from(rng.random_range(0..4)), f64::from(rng.random_range(0..4))]
                } else {
                    [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]
                }
            })
            .collect();
        let low: Vec<Vec<f64>> = pos.iter().map(|a| pos.iter().map(|b| (a[0] - b[0]).hypot(a[1] - b[1])).collect()).collect();
        let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..3)).collect();
        let k = rng.random_range(1..n);
        let hm = DissimilarityMatrix::from_row_major(n, high.concat(), None).unwrap();
        let flat = |d: &[Vec<f64>]| (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| d[i][j]).collect::<Vec<_>>();
        let (hp, lp) = (flat(&high), flat(&low));
        let mut diffs = vec![
            trustworthiness(&hm, &pos, k).unwrap() - tw_oracle(&high, &low, k),
            continuity(&hm, &pos, k).unwrap() - tw_oracle(&low, &high, k),
        ];
        if lp.iter().any(|&e| e > 0.0) {
            let de: f64 = hp.iter().zip(&lp).map(|(a, b)| a * b).sum();
            let dd: f64 = hp.iter().map(|a| a * a).sum();
            let ee: f64 = lp.iter().map(|b| b * b).sum();
            diffs.push(normalized_stress(&hm, &pos).unwrap() - (1.0 - de * de / (dd * ee)));
        }
        if hp.iter().any(|&v| v != hp[0]) && lp.iter().any(|&v| v != lp[0]) {
            diffs.push(shepard_correlation(&hm, &pos).unwrap() - pearson(&avg_ranks(&hp), &avg_ranks(&lp)));
        }
        let hits = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && rank(&low, i, j) <= k && labels[i] == labels[j])
            .count();
        let lab = Labeling::new(0, labels, 3).unwrap();
        diffs.push(neighborhood_hit(&pos, &lab, k).unwrap() - hits as f64 / (n * k) as f64);
        worst = diffs.iter().fold(worst, |w, d| w.max(d.abs()));
    }
    check(worst <= 1e-12, format!("200 instances, largest deviation {worst:.1e}"))
}

fn bfs_components(n: usize, edges: &[(usize, usize)], labels: &[usize], c: usize) -> u64 {
    let mut seen = vec![false; n];
    let mut count = 0;
    for start in (0..n).filter(|&v| labels[v] == c) {
        if seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &(a, b) in edges {
                let w = if a == v { b } else if b == v { a } else { continue };
                if labels[w] == c && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    count
}

fn fracturedness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for case in 0..500 {
        let n = rng.random_range(3..50);
        let pts: Vec<Point> = (0..n).map(|_| [rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)]).collect();
        let edges = delaunay(&pts).unwrap().edges;
        let categories = rng.random_range(1..6);
        let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..categories)).collect();
        let r = component_fracturedness(&edges, &Labeling::new(0, labels.clone(), categories).unwrap()).unwrap();
        let sum: Fraction = r.per_category.iter().map(|p| p.1).sum();
        if sum != r.f_comp {
            return Err(format!("case {case}: contributions sum to {sum}, total {}", r.f_comp));
        }
        let omega: u64 = (0..categories).map(|c| bfs_components(n, &edges, &labels, c)).sum();
        if omega != r.omega {
            return Err(format!("case {case}: omega {} vs search {omega}", r.omega));
        }
    }
    let line: Vec<Point> = (0..6).map(|i| [f64::from(i), 0.0]).collect();
    let path = delaunay(&line).unwrap().edges;
    let fig = component_fracturedness(&path, &Labeling::new(0, vec![0, 1, 0, 2, 3, 1], 4).unwrap()).unwrap();
    if fig.omega != 6 || fig.f_comp != Fraction::new(1, 3) {
        return Err(format!("fixture gives omega {} and {}", fig.omega, fig.f_comp));
    }
    let uniform = Labeling::new(0, vec![0; 6], 1).unwrap();
    let zero = Fraction::from_integer(0);
    let ok = edge_fracturedness(&path, &uniform).unwrap() == zero
        && component_fracturedness(&path, &uniform).unwrap().f_comp == zero;
    check(ok, "500 graphs sum exactly; 4 categories in 6 components give 1/3; uniform gives 0".into())
}

fn in_circle(a: Point, b: Point, c: Point, d: Point) -> bool {
    let r = |p: Point| [p[0] - d[0], p[1] - d[1]];
    let (a, b, c) = (r(a), r(b), r(c));
    let l = |p: [f64; 2]| p[0] * p[0] + p[1] * p[1];
    let det = l(a) * (b[0] * c[1] - c[0] * b[1]) - l(b) * (a[0] * c[1] - c[0] * a[1]) + l(c) * (a[0] * b[1] - b[0] * a[1]);
    det > 1e-9
}

/// Every triple with an empty circumcircle contributes its three sides.
fn brute_delaunay(p: &[Point]) -> Vec<(usize, usize)> {
    let n = p.len();
    let mut edges = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let o = (p[j][0] - p[i][0]) * (p[k][1] - p[i][1]) - (p[j][1] - p[i][1]) * (p[k][0] - p[i][0]);
                let (b, c) = if o > 0.0 { (j, k) } else { (k, j) };
                if (0..n).filter(|m| ![i, j, k].contains(m)).all(|m| !in_circle(p[i], p[b], p[c], p[m])) {
                    edges.extend([(i, j), (i, k), (j, k)]);
                }
            }
        }
    }
    edges.into_iter().collect()
}

fn geometry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..100 {
        let n = rng.random_range(3..=25);
        let p: Vec<Point> = (0..n).map(|_| [rng.random_range(0.0..100.0), rng.random_range(0.0..100.0)]).collect();
        let g = delaunay(&p).unwrap();
        if g.edges != brute_delaunay(&p) {
            return Err(format!("edge set differs on case {case}"));
        }
        if g.edges.len() != 3 * n - 3 - g.hull.len() {
            return Err(format!("case {case}: |E| = {} with hull {}", g.edges.len(), g.hull.len()));
        }
    }
    let bounds = Rect::new(-10.0, -10.0, 120.0, 120.0);
    for layout in 0..20 {
        let n = rng.random_range(2..40);
        let p: Vec<Point> = (0..n).map(|_| [rng.random_range(0.0..100.0), rng.random_range(0.0..100.0)]).collect();
        let v = voronoi(&delaunay(&p).unwrap(), bounds).unwrap();
        for gx in 0..100 {
            for gy in 0..100 {
                let q = [bounds.x + (f64::from(gx) + 0.5) * 1.2, bounds.y + (f64::from(gy) + 0.5) * 1.2];
                let d = |i: usize| (p[i][0] - q[0]).hypot(p[i][1] - q[1]);
                let best = (0..n).map(d).fold(f64::INFINITY, f64::min);
                let inside: Vec<usize> = v.cells.iter().filter(|c| c.contains(q)).map(|c| c.site).collect();
                if inside.is_empty() || inside.iter().any(|&c| d(c) - best > 1e-9) {
                    return Err(format!("layout {layout}: grid point {q:?} in cells {inside:?}"));
                }
            }
        }
    }
    check(true, "100 edge sets match the circumcircle search; 20 layouts pass the grid check".into())
}

fn overlap() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = f64::INFINITY;
    for _ in 0..50 {
        let n = rng.random_range(5..80);
        let p: Vec<Point> = (0..n).map(|_| [rng.random_range(-30.0..30.0), rng.random_range(-30.0..30.0)]).collect();
        let r: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..12.0)).collect();
        let out = reduce_overlap(&Layout::from_positions(p.clone(), Method::Mds), &r).unwrap();
        for i in 0..n {
            for j in i + 1..n {
                let q = &out.positions;
                worst = worst.min((q[i][0] - q[j][0]).hypot(q[i][1] - q[j][1]) / (r[i] + r[j]));
            }
        }
        let zero = reduce_overlap(&Layout::from_positions(p.clone(), Method::Mds), &vec![0.0; n]).unwrap();
        if zero.positions != p {
            return Err("zero radii moved points".into());
        }
    }
    check(worst >= 0.99, format!("worst separation {worst:.4} of r_i + r_j; zero radii unchanged"))
}

fn structure() -> Outcome {
    let s = titanic();
    let m = build_map(&s, &MapOptions::default().pipeline()).map_err(|e| e.to_string())?;
    let name = |a: usize| s.schema().attribute(a).name.clone();
    let find = |n: &str| s.schema().find_attribute(n).unwrap();
    let (class, sex, survived) = (find("Class"), find("Sex"), find("Survived"));
    let zero = Fraction::from_integer(0);
    let at = |a: usize| m.ranking.iter().position(|&x| x == a).unwrap();
    let report = &m.fracturedness;
    let detail = format!(
        "ranking {:?}; F_comp Sex {}, Survived {}; F_edge Class {}",
        m.ranking.iter().map(|&a| name(a)).collect::<Vec<_>>(),
        report.attribute(sex).f_comp,
        report.attribute(survived).f_comp,
        report.attribute(class).f_edge,
    );
    check(
        report.attribute(sex).f_comp == zero
            && report.attribute(survived).f_comp == zero
            && at(sex) < at(class)
            && at(survived) < at(class),
        detail,
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = titanic_path();
    let run = |sub: &str, out: &str| -> Result<Vec<u8>, String> {
        let path = dir.path().join(out);
        let status = Command::new(env!("CARGO_BIN_EXE_catmap"))
            .args([sub, "--seed", "7", "--secondary-attribute", "Sex", "--input"])
            .arg(&input)
            .arg("--output")
            .arg(&path)
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("{sub} exited with {status}"));
        }
        std::fs::read(&path).map_err(|e| e.to_string())
    };
    let layout = (run("project", "a.json")?, run("project", "b.json")?);
    let svg = (run("render", "a.svg")?, run("render", "b.svg")?);
    check(
        layout.0 == layout.1 && svg.0 == svg.1,
        format!("layout {} bytes, SVG {} bytes, identical across runs", layout.0.len(), svg.0.len()),
    )
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 10] = [
        ("titanic deduplication", 1, dedup),
        ("distance identities", 5, distances),
        ("SMACOF properties", 30, smacof),
        ("Titanic quality table", 60, table_one),
        ("quality metric oracles", 30, quality_oracles),
        ("fracturedness exactness", 10, fracturedness),
        ("geometry oracles", 60, geometry),
        ("overlap reduction", 10, overlap),
        ("Titanic structure", 10, structure),
        ("CLI determinism", 10, determinism),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(d) if elapsed > Duration::from_secs(budget) => Err(format!("{d}; over the {budget} s budget")),
            o => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("{tag} {name} ({:.2} s): {detail}", elapsed.as_secs_f64());
        failed += usize::from(outcome.is_err());
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
