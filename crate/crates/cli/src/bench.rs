//! The exhaustive sweep behind `bench` and the search behind `search-noncoherent`.
//!
//! Spaces are jobs; a scoped worker pool evaluates them independently and the
//! results are merged in job order, so the report does not depend on scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use localgpd::fintop::all_topologies;
use localgpd::groupoid::TopGroupoid;
use localgpd::gsheaf::{transport_sweep, TransportSweep};
use localgpd::holonomy::{holonomy_sweep, HolonomySweep};
use localgpd::localsub::{adjunction_check, atlas_name, for_each_atlas, for_each_local_subgroupoid, theorem_bench, Ambient, BenchReport};
use localgpd::presheaf::enumerate::for_each_presheaf;
use localgpd::FinSpace;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::report::Report;

/// Presheaf and transport sweeps stop at this many points.
/// Shortest witnesses kept per verdict.
const WITNESSES_SHOWN: usize = 4;

pub const HEAVY_SWEEP_POINTS: usize = 3;
/// Chart bound used on spaces above three points when `--max-charts` is not given.
pub const LARGE_SPACE_CHARTS: usize = 2;
/// Refinement count above which the cover oracle gives up on an atlas.
const REFINEMENT_LIMIT: usize = 1 << 16;
/// Witnesses kept per verdict.
const WITNESSES: usize = 16;

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub max_points: usize,
    pub max_arrows: usize,
    pub max_charts: Option<usize>,
    pub max_instances: Option<usize>,
    pub max_stalk: usize,
    pub seed: u64,
    pub workers: usize,
}

impl BenchOptions {
    fn charts_for(&self, n: usize) -> usize {
        self.max_charts.unwrap_or(if n <= 3 { 64 } else { LARGE_SPACE_CHARTS })
    }
}

#[derive(Default)]
struct Outcome {
    atlases: usize,
    glob_mismatches: Vec<String>,
    glob_skipped: usize,
    wide: usize,
    local: usize,
    unit: Vec<String>,
    counit: Vec<String>,
    monotone: Vec<String>,
    triangle: Vec<String>,
    correspondence: Vec<String>,
    strict_counit: Vec<String>,
    theorems: Option<BenchReport>,
    holonomy: HolonomySweep,
    transport: Option<TransportSweep>,
    presheaves: usize,
    mu_mismatches: Vec<String>,
}

fn keep(into: &mut Vec<String>, from: impl IntoIterator<Item = String>) {
    for w in from {
        if into.len() < WITNESSES {
            into.push(w);
        }
    }
}

fn run_space(sp: &FinSpace, opts: &BenchOptions) -> CliResult<Outcome> {
    let lib = |e| CliError::classify("bench", e);
    let n = sp.len();
    let amb = Ambient::pair(sp);
    let tg = TopGroupoid::pair(sp);
    let charts = opts.charts_for(n);
    let mut out = Outcome::default();

    let mut err = None;
    for_each_atlas(&amb, charts, |s| {
        out.atlases += 1;
        let fast = s.glob();
        match s.glob_by_covers(REFINEMENT_LIMIT) {
            Ok(covers) => {
                if covers != fast || s.glob_by_definition() != fast {
                    keep(&mut out.glob_mismatches, [format!("{}: {}", sp.key(sp.whole()), atlas_name(s))]);
                }
            }
            Err(localgpd::Error::ResourceCap(_)) => out.glob_skipped += 1,
            Err(e) => {
                err.get_or_insert(e);
            }
        }
    })
    .map_err(lib)?;
    if let Some(e) = err {
        return Err(lib(e));
    }

    let adj = adjunction_check(&amb).map_err(lib)?;
    out.wide = adj.wide;
    out.local = adj.local;
    keep(&mut out.unit, adj.unit_violations);
    keep(&mut out.counit, adj.counit_violations);
    keep(&mut out.monotone, adj.monotonicity_violations);
    keep(&mut out.triangle, adj.triangle_violations);
    keep(&mut out.correspondence, adj.correspondence_violations);
    keep(&mut out.strict_counit, adj.strict_counit);

    out.theorems = Some(theorem_bench(&amb, charts).map_err(lib)?);
    out.holonomy = holonomy_sweep(&tg, charts).map_err(lib)?;

    if n <= HEAVY_SWEEP_POINTS {
        out.transport = Some(transport_sweep(sp, opts.max_stalk).map_err(lib)?);
        for_each_presheaf(sp, opts.max_stalk, false, |p| {
            out.presheaves += 1;
            if p.is_sheaf() != p.mu_bijective_everywhere() {
                keep(&mut out.mu_mismatches, [format!("presheaf with sizes {:?} on {:?}", p.sizes(), sp.min_nbhds())]);
            }
        });
    }
    Ok(out)
}

/// The spaces to sweep, sampled down to `max_instances` with the seed when needed.
fn jobs(opts: &BenchOptions) -> CliResult<(Vec<FinSpace>, usize)> {
    let mut all = Vec::new();
    for n in 1..=opts.max_points {
        if n * n > opts.max_arrows {
            return Err(CliError::ResourceCap(format!("pair groupoid on {n} points has {} arrows, --max-arrows is {}", n * n, opts.max_arrows)));
        }
        all.extend(all_topologies(n));
    }
    let total = all.len();
    match opts.max_instances {
        Some(k) if k < total => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let mut picked = rand::seq::index::sample(&mut rng, total, k).into_vec();
            picked.sort_unstable();
            Ok((picked.into_iter().map(|i| all[i].clone()).collect(), total))
        }
        _ => Ok((all, total)),
    }
}

fn run_pool(spaces: &[FinSpace], opts: &BenchOptions) -> CliResult<Vec<Outcome>> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<CliResult<Outcome>>>> = Mutex::new((0..spaces.len()).map(|_| None).collect());
    let workers = opts.workers.clamp(1, spaces.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= spaces.len() {
                    break;
                }
                let result = run_space(&spaces[i], opts);
                slots.lock().expect("no worker panics while holding the lock")[i] = Some(result);
            });
        }
    });
    slots.into_inner().expect("workers finished").into_iter().map(|r| r.expect("every job ran")).collect()
}

pub fn bench(opts: &BenchOptions, r: &mut Report) -> CliResult<()> {
    let (spaces, total) = jobs(opts)?;
    let results = run_pool(&spaces, opts)?;

    let mut sum = Outcome::default();
    let mut theorems: Option<BenchReport> = None;
    let mut transport: Option<TransportSweep> = None;
    for o in results {
        sum.atlases += o.atlases;
        sum.glob_skipped += o.glob_skipped;
        sum.wide += o.wide;
        sum.local += o.local;
        sum.presheaves += o.presheaves;
        keep(&mut sum.glob_mismatches, o.glob_mismatches);
        keep(&mut sum.unit, o.unit);
        keep(&mut sum.counit, o.counit);
        keep(&mut sum.monotone, o.monotone);
        keep(&mut sum.triangle, o.triangle);
        keep(&mut sum.correspondence, o.correspondence);
        keep(&mut sum.strict_counit, o.strict_counit);
        keep(&mut sum.mu_mismatches, o.mu_mismatches);
        sum.holonomy.merge(o.holonomy);
        if let Some(t) = o.theorems {
            match &mut theorems {
                Some(acc) => acc.merge(t),
                None => theorems = Some(t),
            }
        }
        if let Some(t) = o.transport {
            match &mut transport {
                Some(acc) => acc.merge(t),
                None => transport = Some(t),
            }
        }
    }

    let list = |r: &mut Report, name: &str, ws: &[String]| {
        r.verdict(name, ws.is_empty());
        let mut shown: Vec<&String> = ws.iter().collect();
        shown.sort_by_key(|w| w.len());
        for w in shown.into_iter().take(WITNESSES_SHOWN) {
            r.witness(name, w.as_str().into());
        }
    };
    list(r, "glob_triple_agreement", &sum.glob_mismatches);
    list(r, "adjunction_unit", &sum.unit);
    list(r, "adjunction_counit", &sum.counit);
    list(r, "adjunction_monotone", &sum.monotone);
    list(r, "adjunction_triangle", &sum.triangle);
    list(r, "adjunction_correspondence", &sum.correspondence);
    if opts.max_points >= 2 {
        r.check("strict_counit_exhibited", !sum.strict_counit.is_empty(), || "no wide H with glob(loc(H)) ⊊ H".into());
    }
    let mut statements = Vec::new();
    if let Some(t) = &theorems {
        for st in &t.statements {
            list(r, &format!("theorem: {}", st.name), &st.witnesses);
            statements.push(json!({ "name": st.name, "checked": st.checked, "hypothesis_held": st.hypothesis_held, "counterexamples": st.witnesses.len() }));
        }
    }
    let h = &sum.holonomy;
    let mut hol_failures = h.locally_top_failures.clone();
    hol_failures.extend(h.holonomy_failures.iter().cloned());
    if h.lemma_counterexamples > 0 {
        hol_failures.push(format!("{} germ-independence counterexamples", h.lemma_counterexamples));
    }
    list(r, "holonomy_on_strictly_regular_atlases", &hol_failures);
    if let Some(t) = &transport {
        list(r, "transport_uniqueness", &t.uniqueness_violations);
        let mut lift = t.lift_failures.clone();
        if t.discontinuous_lifts > 0 {
            lift.push(format!("{} discontinuous lifts", t.discontinuous_lifts));
        }
        list(r, "lift_round_trip", &lift);
        list(r, "sheaf_iff_mu_bijective", &sum.mu_mismatches);
    }

    r.set("spaces", json!({ "swept": spaces.len(), "available": total, "seed": opts.seed }));
    r.set("max_points", opts.max_points);
    r.set(
        "max_charts",
        (1..=opts.max_points).map(|n| json!({ "points": n, "charts": opts.charts_for(n) })).collect::<Vec<_>>(),
    );
    r.set("atlases", sum.atlases);
    r.set("glob_cover_oracle_skipped", sum.glob_skipped);
    r.set("wide_subgroupoids", sum.wide);
    r.set("local_subgroupoids", sum.local);
    r.set("strict_counit_examples", &sum.strict_counit);
    r.set("theorems", statements);
    r.set(
        "holonomy",
        json!({
            "atlases": h.atlases,
            "weakly_adaptable": h.weakly_adaptable,
            "regular": h.regular,
            "strictly_regular": h.strictly_regular,
            "phi_bijective": h.phi_bijective,
            "kernel_enlarged": h.kernel_enlarged,
        }),
    );
    if let Some(t) = &transport {
        r.set(
            "transport",
            json!({
                "points": HEAVY_SWEEP_POINTS.min(opts.max_points),
                "max_stalk": opts.max_stalk,
                "locally_transitive_pairs": t.transitive_pairs,
                "max_transports": t.max_transports,
                "lifts": t.lifts,
                "structure_count_differs": t.count_mismatches,
            }),
        );
        r.set("presheaves", sum.presheaves);
    }
    Ok(())
}

/// Looks for local subgroupoids of pair groupoids that are not globally coherent.
pub fn search_noncoherent(max_points: usize, max_arrows: usize, r: &mut Report) -> CliResult<()> {
    let mut per_size = Vec::new();
    let mut first = Vec::new();
    let mut non_coherent = Vec::new();
    for n in 1..=max_points {
        if n * n > max_arrows {
            return Err(CliError::ResourceCap(format!("pair groupoid on {n} points has {} arrows, --max-arrows is {max_arrows}", n * n)));
        }
        let spaces = all_topologies(n);
        let (mut total, mut found) = (0usize, 0usize);
        for sp in &spaces {
            let amb = Ambient::pair(sp);
            for_each_local_subgroupoid(&amb, |s| {
                total += 1;
                if !s.is_coherent() {
                    keep(&mut non_coherent, [atlas_name(s)]);
                }
                if !s.is_globally_coherent() {
                    found += 1;
                    if first.len() < 4 {
                        let nbhd: Vec<String> = (0..n).map(|x| format!("N({})={}", sp.name(x), sp.key(sp.min_nbhd(x)))).collect();
                        let germs: Vec<String> = s.germ_names().iter().enumerate().map(|(x, a)| format!("{}: {{{}}}", sp.name(x), a.join(","))).collect();
                        let back: Vec<String> = s.loc_glob().germ_names().iter().enumerate().map(|(x, a)| format!("{}: {{{}}}", sp.name(x), a.join(","))).collect();
                        first.push(json!({ "space": nbhd, "germs": germs, "loc_glob_germs": back }));
                    }
                }
            });
        }
        per_size.push(json!({ "points": n, "spaces": spaces.len(), "local_subgroupoids": total, "not_globally_coherent": found }));
    }
    r.verdict("every_local_subgroupoid_coherent", non_coherent.is_empty());
    for w in non_coherent {
        r.witness("every_local_subgroupoid_coherent", w.into());
    }
    r.set("found", !first.is_empty());
    r.set("by_size", per_size);
    r.set("examples", first);
    Ok(())
}
