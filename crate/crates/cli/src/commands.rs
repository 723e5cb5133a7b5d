//! One function per instance command. Each fills a report and returns the instance
//! to write under `--emit`: the input with any derived table swapped in.

use localgpd::foliate::{fine_topology, leaf_check, ChartSource};
use localgpd::groupoid::{Groupoid, TopGroupoid};
use localgpd::gsheaf::{
    check_continuity, is_locally_transitive, lift_r_action, r_structures, s_transport_check, transport_charts, unique_transport,
    validate_action, GroupoidAction,
};
use localgpd::holonomy::{atlas_regularity, check_locally_top, holonomy_groupoid, HolonomyGroupoid};
use localgpd::localsub::{adjunction_check, subgroupoid_coherence, LocalEquivRel, LocalSubgroupoid};
use localgpd::presheaf::{EtaleSheaf, Presheaf};
use localgpd::{Bits, FinSpace};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::report::Report;
use crate::schema::{
    action_from_rows, action_rows, arrow_set, atlas_json, germ_id, point_set, presheaf_json, HolClass, InstanceFile, TransportChart,
};

/// Refinement count above which the cover oracle for `glob` gives up.
const REFINEMENT_LIMIT: usize = 1 << 16;
/// Failing families listed per report; the total is always given.
const F2_SHOWN: usize = 8;
/// Sections listed per open.
const SECTIONS_SHOWN: usize = 32;
/// Germ choices examined by the brute-force section count.
const CHOICE_LIMIT: usize = 1 << 20;

pub struct Ctx<'a> {
    pub file: &'a InstanceFile,
    pub max_points: usize,
    pub max_arrows: usize,
    pub oracle: bool,
}

pub type Emitted = Option<InstanceFile>;

fn keys(sp: &FinSpace, sets: &[Bits]) -> Vec<String> {
    sets.iter().map(|&b| sp.key(b)).collect()
}

impl Ctx<'_> {
    fn capped(&self, sp: FinSpace) -> CliResult<FinSpace> {
        if sp.len() > self.max_points {
            return Err(CliError::ResourceCap(format!("{} points, --max-points is {}", sp.len(), self.max_points)));
        }
        Ok(sp)
    }

    fn space(&self) -> CliResult<FinSpace> {
        self.capped(self.file.space()?)
    }

    fn groupoid(&self, sp: &FinSpace) -> CliResult<Groupoid> {
        let g = self.file.groupoid(sp)?;
        if g.arrow_count() > self.max_arrows {
            return Err(CliError::ResourceCap(format!("{} arrows, --max-arrows is {}", g.arrow_count(), self.max_arrows)));
        }
        Ok(g)
    }

    fn top(&self) -> CliResult<(FinSpace, TopGroupoid)> {
        let sp = self.space()?;
        let g = self.groupoid(&sp)?;
        let tg = self.file.top_groupoid(&sp, &g)?;
        Ok((sp, tg))
    }

    fn atlas(&self, tg: &TopGroupoid) -> CliResult<LocalSubgroupoid> {
        let amb = self.file.ambient(&tg.objects, &tg.groupoid)?;
        self.file.atlas(&amb)
    }

    fn subgroupoid(&self, g: &Groupoid, field: &str) -> CliResult<Option<Bits>> {
        let names = match field {
            "subgroupoid" => &self.file.subgroupoid,
            _ => &self.file.neighbourhood,
        };
        names.as_ref().map(|n| arrow_set(g, n, field)).transpose()
    }

    fn valid_presheaf(&self, sp: &FinSpace) -> CliResult<Presheaf> {
        let p = self.file.presheaf(sp)?;
        p.validate().map_err(|e| CliError::classify("presheaf", e))?;
        Ok(p)
    }

    fn sheaf(&self, sp: &FinSpace) -> CliResult<EtaleSheaf> {
        Ok(self.valid_presheaf(sp)?.sheafify())
    }

    fn unchanged(&self) -> Emitted {
        Some(self.file.clone())
    }
}

pub fn check_space(ctx: &Ctx, r: &mut Report) -> CliResult<Emitted> {
    let sp = match ctx.file.space() {
        Ok(sp) => ctx.capped(sp)?,
        Err(CliError::Invalid { source, .. }) => {
            r.check("topology", false, || source.to_string().into());
            return Ok(ctx.unchanged());
        }
        Err(e) => return Err(e),
    };
    r.verdict("topology", true);
    r.set("points", sp.len());
    r.set("open_count", sp.opens().len());
    let nbhds: serde_json::Map<String, Value> = (0..sp.len()).map(|x| (sp.name(x).to_string(), sp.key(sp.min_nbhd(x)).into())).collect();
    r.set("minimal_neighbourhoods", nbhds);
    r.set("sober", sp.is_sober());
    r.set("components", keys(&sp, &sp.components(sp.whole())));
    Ok(ctx.unchanged())
}

pub fn check_presheaf(ctx: &Ctx, r: &mut Report) -> CliResult<Emitted> {
    let sp = ctx.space()?;
    let p = ctx.file.presheaf(&sp)?;
    match p.validate() {
        Ok(()) => r.verdict("functorial", true),
        Err(e) => r.check("functorial", false, || e.to_string().into()),
    }
    let sizes: serde_json::Map<String, Value> = sp.opens().iter().map(|&u| (sp.key(u), p.size(u).into())).collect();
    r.set("sizes", sizes);
    Ok(ctx.unchanged())
}

pub fn check_sheaf(ctx: &Ctx, r: &mut Report) -> CliResult<Emitted> {
    let sp = ctx.space()?;
    let p = ctx.valid_presheaf(&sp)?;
    let check = p.check_sheaf().map_err(|e| CliError::classify("presheaf", e))?;
    r.check("F1", check.f1, || {
        let w = check.f1_witness.as_ref().expect("F1 failure has a witness");
        json!({
            "open": sp.key(w.open),
            "cover": keys(&sp, &w.cover),
            "elements": [p.label(w.open, w.first), p.label(w.open, w.second)],
        })
    });
    r.verdict("F2", check.f2);
    for w in check.f2_witnesses.iter().take(F2_SHOWN) {
        let family: Vec<String> = w.cover.iter().zip(&w.family).map(|(&v, &e)| p.label(v, e)).collect();
        r.witness("F2", json!({ "open": sp.key(w.open), "cover": keys(&sp, &w.cover), "family": family }));
    }
    r.set("f2_failures", check.f2_witnesses.len());
    r.check("equalizer_form_agrees", check.equalizer_agrees, || "equalizer and F1∧F2 disagree on some cover".into());
    if ctx.oracle {
        let mu = p.mu_bijective_everywhere();
        r.check("mu_criterion_agrees", mu == (check.f1 && check.f2), || json!({ "mu_bijective": mu }));
    }
    Ok(ctx.unchanged())
}

fn stalk_table(sheaf: &EtaleSheaf) -> serde_json::Map<String, Value> {
    let sp = sheaf.space();
    (0..sp.len())
        .map(|x| (sp.name(x).to_string(), (0..sheaf.stalk_size(x)).map(|e| germ_id(sheaf, x, e)).collect::<Vec<_>>().into()))
        .collect()
}

fn mu_table(p: &Presheaf, sheaf: &EtaleSheaf) -> Vec<Value> {
    let sp = p.space();
    sp.opens()
        .iter()
        .map(|&u| {
            let st = p.mu_status(sheaf, u);
            json!({ "open": sp.key(u), "injective": st.injective, "surjective": st.surjective, "sections": st.sections })
        })
        .collect()
}

pub fn sheafify(ctx: &Ctx, r: &mut Report) -> CliResult<Emitted> {
    let sp = ctx.space()?;
    let p = ctx.valid_presheaf(&sp)?;
    let sheaf = p.sheafify();
    let canonical = sheaf.canonical_presheaf();
    r.check("sheaf", canonical.is_sheaf(), || "sections of the sheafification fail F1∧F2".into());
    let lh = sheaf.projection_is_local_homeomorphism().map_err(|e| CliError::classify("presheaf", e))?;
    r.check("local_homeomorphism", lh, || "projection of the germ space".into());
    r.set("stalks", stalk_table(&sheaf));
    r.set("mu", mu_table(&p, &sheaf));
    let mut out = ctx.file.clone();
    out.presheaf = Some(presheaf_json(&canonical));
    Ok(Some(out))
}

/// Counts germ choices over `u` that are sections, without backtracking.
fn brute_section_count(sheaf: &EtaleSheaf, u: Bits) -> CliResult<usize> {
    let pts: Vec<usize> = u.iter().collect();
    let total = pts.iter().try_fold(1usize, |acc, &x| acc.checked_mul(sheaf.stalk_size(x)).filter(|&t| t <= CHOICE_LIMIT));
    let total = total.ok_or_else(|| CliError::ResourceCap(format!("more than {CHOICE_LIMIT} germ choices")))?;
    let mut count = 0;
    for mut code in 0..total {
        let mut values = vec![None; sheaf.space().len()];
        for &x in &pts {
            let k = sheaf.stalk_size(x);
            values[x] = Some(code % k);
            code /= k;
        }
        count += sheaf.is_section(&localgpd::presheaf::Section { domain: u, values }) as usize;
    }
    Ok(count)
}

pub fn sections(ctx: &Ctx, r: &mut Report) -> CliResult<Emitted> {
    let sp = ctx.space()?;
    let p = ctx.valid_presheaf(&sp)?;
    let sheaf = p.sheafify();
    let mut rows = Vec::new();
    let mut agree = true;
    for &u in sp.opens() {
        let secs = sheaf.sections(u);
        if ctx.oracle {
            agree &= brute_section_count(&sheaf, u)? == secs.len();
        }
        let shown: Vec<String> = secs.iter().take(SECTIONS_SHOWN).map(|s| sheaf.section_label(s)).collect();
        let st = p.mu_status(&sheaf, u);
        rows.push(json!({
            "open": sp.key(u),
            "count": secs.len(),
            "sections": shown,
            "mu_injective": st.injective,
            "mu_surjective": st.surjective,
        }));
    }
    if ctx.oracle {
        r.check("count_oracle_agrees", agree, || "brute-force section count differs".into());
    }
    r.set("sections", rows);
    Ok(ctx.unchanged())
}

pub fn check_groupoid(ctx: &Ctx, r: &mut Report) -> CliResult<Emitted> {
    let sp = ctx.space()?;
    let g = match ctx.groupoid(&sp) {
        Ok(g) => g,
        Err(CliError::Invalid { source, .. }) => {
            r.check("axioms", false, || source.to_string().into());
            return Ok(ctx.unchanged());
        }
        Err(e) => return Err(e),
    };
    r.verdict("axioms", true);
    r.set("objects", g.object_count());
    r.set("arrows", g.arrow_count());
    let all = g.all_arrows();
    r.set("components", keys(&sp, &g.components(all, g.all_objects())));
    let groups: serde_json::Map<String, Value> = (0..g.object_count()).map(|x| (sp.name(x).to_string(), g.vertex_group(all, x).len().into())).collect();
    r.set("vertex_group_orders", groups);
    match ctx.file.top_groupoid(&sp, &g) {
        Ok(tg) => {
            r.verdict("topological", true);
            r.set("etale", tg.is_etale());
            r.set("open_groupoid", tg.is_open_groupoid());
        }
        Err(CliError::Invalid { source, .. }) => r.check("topological", false, || source.to_string().into()),
        Err(e) => return Err(e),
    }
    Ok(ctx.unchanged())
}

fn arrow_names(g: &Groupoid, h: Bits) -> Vec<String> {
    g.arrow_list(h)
}

pub fn glob(ctx: &Ctx, r: &mut Report) -> CliResult<Emitted> {
    let sp = ctx.space()?;
    let g = ctx.groupoid(&sp)?;
    let amb = ctx.file.ambient(&sp, &g)?;
    let s = ctx.file.atlas(&amb)?;
    let h = s.glob();
    if ctx.oracle {
        let covers = s.glob_by_covers(REFINEMENT_LIMIT).map_err(|e| CliError::classify("atlas", e))?;
        r.check("cover_oracle_agrees", covers == h, || arrow_names(&g, covers).into());
        let def = s.glob_by_definition();
        r.check("definition_oracle_agrees", def == h, || arrow_names(&g, def).into());
    }
    r.set("arrows", arrow_names(&g, h));
    r.set("arrow_count", h.len());
    r.set("components", keys(&sp, &g.components(h, sp.whole())));
    let back = LocalSubgroupoid::loc(&amb, h).map_err(|e| CliError::classify("atlas", e))?;
    let mut out = ctx.file.clone();
    out.atlas = Some(atlas_json(&back));
    out.subgroupoid = Some(arrow_names(&g, h));
    Ok(Some(out))
}

fn germ_map(s: &LocalSubgroupoid) -> serde_json::Map<String, Value> {
    let sp = s.space();
    s.germ_names().into_iter().enumerate().map(|(x, names)| (sp.name(x).to_string(), names.into())).collect()
}

pub fn loc(ctx: &Ctx, r: &mut Report) -> CliResult<Emitted> {
    let sp = ctx.space()?;
    let g = ctx.groupoid(&sp)?;
    let amb = ctx.file.ambient(&sp, &g)?;
    let h = ctx.subgroupoid(&g, "subgroupoid")?.ok_or_else(|| CliError::schema("subgroupoid", "required by this command"))?;
    let s = LocalSubgroupoid::loc(&amb, h).map_err(|e| CliError::classify("subgroupoid", e))?;
    let back = s.glob();
    r.check("counit", back.is_subset(h), || arrow_names(&g, back).into());
    r.set("germs", germ_map(&s));
    let c = subgroupoid_coherence(&amb, h).map_err(|e| CliError::classify("subgroupoid", e))?;
    r.set("locally_coherent", c.locally_coherent);
    r.set("coherent", c.coherent);
    let mut out = ctx.file.clone();
    out.atlas = Some(atlas_json(&s));
    Ok(Some(out))
}

pub fn coherence(ctx: &Ctx, r: &mut Report) -> CliResult<Emitted> {
    let sp = ctx.space()?;
    let g = ctx.groupoid(&sp)?;
    let amb = ctx.file.ambient(&sp, &g)?;
    let h = ctx.subgroupoid(&g, "subgroupoid")?;
    if ctx.file.atlas.is_none() && h.is_none() {
        return Err(CliError::schema("atlas", "coherence needs an atlas or a subgroupoid"));
    }
    if ctx.file.atlas.is_some() {
        let s = ctx.file.atlas(&amb)?;
        let c = s.coherence();
        let lg = s.loc_glob();
        r.check("coherent", c.coherent, || json!({ "loc_glob_germs": germ_map(&lg) }));
        r.check("globally_coherent", c.globally_coherent, || json!({ "germs": germ_map(&s), "loc_glob_germs": germ_map(&lg) }));
        r.check("totally_coherent", c.totally_coherent, || {
            let bad: Vec<String> = sp.opens().iter().filter(|&&u| !u.is_empty() && !s.restrict(u).map(|t| t.is_globally_coherent()).unwrap_or(false)).map(|&u| sp.key(u)).collect();
            json!({ "restrictions_not_globally_coherent": bad })
        });
        r.set("glob", arrow_names(&g, s.glob()));
    }
    if let Some(h) = h {
        let c = subgroupoid_coherence(&amb, h).map_err(|e| CliError::classify("subgroupoid", e))?;
        let back = LocalSubgroupoid::loc(&amb, h).map_err(|e| CliError::classify("subgroupoid", e))?.glob();
        r.check("locally_coherent", c.locally_coherent, || "loc(H) is not coherent".into());
        r.check("coherent_subgroupoid", c.coherent, || json!({ "glob_loc": arrow_names(&g, back) }));
    }
    Ok(ctx.unchanged())
}

pub fn adjunction(ctx: &Ctx, r: &mut Report) -> CliResult<Emitted> {
    let sp = ctx.space()?;
    let g = ctx.groupoid(&sp)?;
    let amb = ctx.file.ambient(&sp, &g)?;
    let a = adjunction_check(&amb).map_err(|e| CliError::classify("groupoid", e))?;
    for (name, list) in [
        ("counit", &a.counit_violations),
        ("unit", &a.unit_violations),
        ("monotone", &a.monotonicity_violations),
        ("triangle", &a.triangle_violations),
        ("correspondence", &a.correspondence_violations),
    ] {
        r.verdict(name, list.is_empty());
        for w in list {
            r.witness(name, w.clone().into());
        }
    }
    r.set("wide_subgroupoids", a.wide);
    r.set("local_subgroupoids", a.local);
    r.set("strict_counit", &a.strict_counit);
    Ok(ctx.unchanged())
}

pub fn foliate(ctx: &Ctx, r: &mut Report, source: ChartSource) -> CliResult<Emitted> {
    let sp = ctx.space()?;
    let g = ctx.groupoid(&sp)?;
    let amb = ctx.file.ambient(&sp, &g)?;
    let s = ctx.file.atlas(&amb)?;
    let top = fine_topology(&s, source);
    let check = leaf_check(&s, source);
    r.check("identity_continuous", top.identity_is_continuous(&sp), || "X^s → X".into());
    r.check("components_clopen", check.components_clopen, || keys(&sp, &check.glob_components).into());
    r.check("leaves_are_glob_components", check.equal, || {
        json!({ "leaves": keys(&sp, &check.leaves), "glob_components": keys(&sp, &check.glob_components) })
    });
    r.set("chart_source", if source == ChartSource::Atlas { "atlas" } else { "canonical-germs" });
    r.set("fine_opens", keys(&sp, top.fine.opens()));
    r.set("generators", keys(&sp, &top.generators));
    r.set("leaves", keys(&sp, &check.leaves));
    r.set("glob_components", keys(&sp, &check.glob_components));
    Ok(ctx.unchanged())
}

pub fn regularity(ctx: &Ctx, r: &mut Report) -> CliResult<Emitted> {
    let (_, tg) = ctx.top()?;
    let s = ctx.atlas(&tg)?;
    let reg = atlas_regularity(&tg, &s).map_err(|e| CliError::classify("atlas", e))?;
    r.set("weakly_adaptable", reg.weakly_adaptable);
    r.set("regular", reg.regular);
    r.set("strictly_regular", reg.strictly_regular);
    r.set("notes", &reg.witnesses);
    Ok(ctx.unchanged())
}

/// `(H, W)` from explicit arrow sets, or `(glob(s), ⋃ charts)` from an atlas.
fn top_pair(ctx: &Ctx, tg: &TopGroupoid, r: &mut Report) -> CliResult<(Bits, Bits)> {
    let g = &tg.groupoid;
    if let (Some(h), Some(w)) = (ctx.subgroupoid(g, "subgroupoid")?, ctx.subgroupoid(g, "neighbourhood")?) {
        return Ok((h, w));
    }
    if ctx.file.atlas.is_none() {
        return Err(CliError::schema("atlas", "needs an atlas, or both subgroupoid and neighbourhood"));
    }
    let s = ctx.atlas(tg)?;
    let reg = atlas_regularity(tg, &s).map_err(|e| CliError::classify("atlas", e))?;
    r.check("strictly_regular", reg.strictly_regular, || reg.witnesses.clone().into());
    let w = s.charts().iter().fold(Bits::EMPTY, |acc, &(_, h)| acc | h);
    Ok((s.glob(), w))
}

fn locally_top_verdicts(tg: &TopGroupoid, h: Bits, w: Bits, r: &mut Report) -> bool {
    let lt = check_locally_top(tg, h, w);
    for (name, ok) in [("G1", lt.g1), ("G2", lt.g2), ("G3", lt.g3), ("G4", lt.g4), ("G5", lt.g5)] {
        r.verdict(name, ok);
    }
    for (cond, w) in &lt.failures {
        r.witness(cond, w.clone().into());
    }
    lt.holds()
}

pub fn locally_top(ctx: &Ctx, r: &mut Report) -> CliResult<Emitted> {
    let (_, tg) = ctx.top()?;
    let (h, w) = top_pair(ctx, &tg, r)?;
    locally_top_verdicts(&tg, h, w, r);
    r.set("H", arrow_names(&tg.groupoid, h));
    r.set("W", arrow_names(&tg.groupoid, w));
    Ok(ctx.unchanged())
}

pub fn hol_classes(hol: &HolonomyGroupoid) -> Vec<HolClass> {
    let g = &hol.tg.groupoid;
    hol.classes
        .iter()
        .enumerate()
        .map(|(c, a)| HolClass {
            class_id: format!("<{c}>"),
            src: g.objects()[a.src].clone(),
            tgt: g.objects()[a.tgt].clone(),
            phi_image: g.arrow_name(a.phi).to_string(),
            representative_word: hol.word_label(a.representative),
        })
        .collect()
}

pub fn holonomy(ctx: &Ctx, r: &mut Report) -> CliResult<Emitted> {
    let (_, tg) = ctx.top()?;
    let (h, w) = top_pair(ctx, &tg, r)?;
    if !r.passed() || !locally_top_verdicts(&tg, h, w, r) {
        return Ok(ctx.unchanged());
    }
    let hol = holonomy_groupoid(&tg, h, w).map_err(|e| CliError::classify("groupoid", e))?;
    let c = hol.check();
    r.check("quotient_well_defined", c.quotient_well_defined, || "class product depends on representatives".into());
    r.check("phi_morphism", c.phi_morphism, || "φ does not preserve products".into());
    r.check("object_fixing", c.object_fixing, || "φ moves an object".into());
    r.check("phi_surjective", c.phi_surjective, || "image of φ is smaller than H".into());
    r.check("phi_after_embedding", c.embedding, || "φ∘i differs from the inclusion of W".into());
    r.check("kernel_totally_disconnected", c.kernel_totally_disconnected, || "a kernel germ moves its point".into());
    r.check("germ_independence", c.lemma_counterexamples == 0, || c.lemma_counterexamples.into());
    match hol.to_groupoid() {
        Ok(_) => r.verdict("quotient_is_groupoid", true),
        Err(e) => r.check("quotient_is_groupoid", false, || e.to_string().into()),
    }
    let classes = hol_classes(&hol);
    if let Some(given) = &ctx.file.holonomy {
        if *given != classes {
            return Err(CliError::schema("holonomy", "does not match the recomputed classes"));
        }
    }
    r.set("classes", &classes);
    r.set("germs", c.germs);
    r.set("phi_bijective", c.phi_bijective);
    r.set("literal_kernel_normal", c.literal_kernel_normal);
    let mut out = ctx.file.clone();
    out.holonomy = Some(classes);
    Ok(Some(out))
}

/// A parsed action with missing rows reported as a failed verdict.
fn complete_action(r: &mut Report, name: &str, parsed: (GroupoidAction, Vec<String>)) -> Option<GroupoidAction> {
    let (act, missing) = parsed;
    if missing.is_empty() {
        return Some(act);
    }
    r.check(name, false, || json!({ "missing_rows": missing }));
    None
}

pub fn action_check(ctx: &Ctx, r: &mut Report) -> CliResult<Emitted> {
    let (sp, tg) = ctx.top()?;
    let g = &tg.groupoid;
    let sheaf = ctx.sheaf(&sp)?;
    let rows = ctx.file.action.as_ref().ok_or_else(|| CliError::schema("action", "required by this command"))?;
    let Some(act) = complete_action(r, "action_laws", action_from_rows(g, &sheaf, rows, "action")?) else {
        return Ok(ctx.unchanged());
    };
    r.set("acting_arrows", arrow_names(g, act.arrows));
    match validate_action(g, &sheaf, &act) {
        Ok(()) => r.verdict("action_laws", true),
        Err(e) => {
            r.check("action_laws", false, || e.to_string().into());
            return Ok(ctx.unchanged());
        }
    }
    match check_continuity(&tg, &sheaf, &act) {
        Ok(()) => r.verdict("continuous", true),
        Err(e) => r.check("continuous", false, || e.to_string().into()),
    }
    Ok(ctx.unchanged())
}

fn transport_json(s: &LocalSubgroupoid, sheaf: &EtaleSheaf, germs: &[GroupoidAction]) -> Vec<TransportChart> {
    let g = s.groupoid();
    transport_charts(s, germs)
        .into_iter()
        .map(|(u, h, act)| TransportChart { open: s.space().points_of(u), arrows: g.arrow_list(h), action: action_rows(g, sheaf, &act) })
        .collect()
}

pub fn transport(ctx: &Ctx, r: &mut Report) -> CliResult<Emitted> {
    let (sp, tg) = ctx.top()?;
    let g = &tg.groupoid;
    let s = ctx.atlas(&tg)?;
    let sheaf = ctx.sheaf(&sp)?;
    let transitive = is_locally_transitive(&s);
    let count = unique_transport(&tg, &s, &sheaf).map_err(|e| CliError::classify("atlas", e))?;
    let shown: Vec<Vec<TransportChart>> = count.witnesses.iter().map(|t| transport_json(&s, &sheaf, t)).collect();
    r.check("at_most_one_transport", !transitive || count.count <= 1, || json!({ "count": count.count, "two_transports": &shown }));
    r.set("locally_transitive", transitive);
    r.set("transport_count", count.count);
    r.set("transports", &shown);

    if let Some(charts) = &ctx.file.transport {
        let mut parsed = Vec::new();
        for (i, c) in charts.iter().enumerate() {
            let path = format!("transport[{i}]");
            let u = point_set(&sp, &c.open, &format!("{path}.open"))?;
            let h = arrow_set(g, &c.arrows, &format!("{path}.arrows"))?;
            match complete_action(r, "transport_valid", action_from_rows(g, &sheaf, &c.action, &format!("{path}.action"))?) {
                Some(act) => parsed.push((u, h, act)),
                None => return Ok(ctx.unchanged()),
            }
        }
        match s_transport_check(&tg, &sheaf, &s, &parsed) {
            Ok(true) => r.verdict("transport_valid", true),
            Ok(false) => r.check("transport_valid", false, || "charts disagree on an overlap".into()),
            Err(e) => r.check("transport_valid", false, || e.to_string().into()),
        }
    }

    if let Ok(ler) = LocalEquivRel::new(s.clone()) {
        let structures = r_structures(&sheaf, &ler);
        r.set("r_structures", structures.len());
        if s.is_globally_coherent() {
            let mut failures = Vec::new();
            for t in &structures {
                let ok = lift_r_action(&sheaf, &ler, t).and_then(|act| {
                    validate_action(g, &sheaf, &act)?;
                    check_continuity(&tg, &sheaf, &act)
                });
                if let Err(e) = ok {
                    failures.push(e.to_string());
                }
            }
            r.check("lift_round_trip", failures.is_empty(), || failures.clone().into());
        }
    }
    Ok(ctx.unchanged())
}
