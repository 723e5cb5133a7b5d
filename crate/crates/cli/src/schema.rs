//! The instance file: one versioned JSON document holding a space and whichever
//! tables a command needs. Every id must resolve and nothing omitted is inferred,
//! except that identity restrictions of a presheaf may be left out.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use localgpd::groupoid::{Groupoid, RawGroupoid, TopGroupoid};
use localgpd::gsheaf::GroupoidAction;
use localgpd::localsub::{Ambient, LocalSubgroupoid};
use localgpd::presheaf::{EtaleSheaf, Presheaf};
use localgpd::{Bits, FinSpace};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    pub space: SpaceJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groupoid: Option<GroupoidJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presheaf: Option<PresheafJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atlas: Option<Vec<ChartJson>>,
    /// A subgroupoid `H` of the groupoid, by arrow ids.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroupoid: Option<Vec<String>>,
    /// The arrow set `W` of a locally topological pair `(H, W)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neighbourhood: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<ActionRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transport: Option<Vec<TransportChart>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holonomy: Option<Vec<HolClass>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceJson {
    pub points: Vec<String>,
    pub opens: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowJson {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidJson {
    pub arrows: Vec<ArrowJson>,
    /// Rows `[f, g, f∘g]` for every pair with `src f = tgt g`.
    pub compose: Vec<[String; 3]>,
    /// Object id to its identity arrow.
    pub identities: BTreeMap<String, String>,
    pub inverses: BTreeMap<String, String>,
    /// Open sets of the arrow space. Without it arrows get the topology pulled back
    /// from `X × X` along `(tgt, src)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrow_opens: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresheafJson {
    /// Keyed by open, written `[a,b]` with points in declaration order.
    pub sets: BTreeMap<String, Vec<String>>,
    pub restr: Vec<RestrJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrJson {
    pub from: String,
    pub to: String,
    pub map: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartJson {
    pub open: Vec<String>,
    pub arrows: Vec<String>,
}

/// `arrow` sends `germ` to `result`; germs are written `point:label`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionRow {
    pub arrow: String,
    pub germ: String,
    pub result: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransportChart {
    pub open: Vec<String>,
    pub arrows: Vec<String>,
    pub action: Vec<ActionRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolClass {
    pub class_id: String,
    pub src: String,
    pub tgt: String,
    pub phi_image: String,
    pub representative_word: String,
}

/// `sha256:` followed by the hex digest of the raw input bytes.
pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

pub fn parse(bytes: &[u8]) -> CliResult<InstanceFile> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let file: InstanceFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let inner = e.inner();
        if inner.is_syntax() || inner.is_eof() {
            CliError::Parse { line: inner.line(), column: inner.column(), msg: inner.to_string() }
        } else {
            CliError::schema(e.path().to_string(), inner.to_string())
        }
    })?;
    de.end().map_err(|e| CliError::Parse { line: e.line(), column: e.column(), msg: e.to_string() })?;
    if file.version != SCHEMA_VERSION {
        return Err(CliError::schema("version", format!("expected {SCHEMA_VERSION}, found {}", file.version)));
    }
    Ok(file)
}

pub fn to_pretty(file: &InstanceFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("instance files serialize");
    s.push('\n');
    s
}

fn require<'a, T>(field: &'a Option<T>, path: &str) -> CliResult<&'a T> {
    field.as_ref().ok_or_else(|| CliError::schema(path, "required by this command"))
}

impl InstanceFile {
    pub fn space(&self) -> CliResult<FinSpace> {
        FinSpace::validate(&self.space.points, &self.space.opens).map_err(|e| CliError::classify("space", e))
    }

    pub fn groupoid(&self, sp: &FinSpace) -> CliResult<Groupoid> {
        let gj = require(&self.groupoid, "groupoid")?;
        let mut index = HashMap::new();
        for (i, a) in gj.arrows.iter().enumerate() {
            if index.insert(a.id.as_str(), i).is_some() {
                return Err(CliError::schema(format!("groupoid.arrows[{i}].id"), format!("duplicate arrow `{}`", a.id)));
            }
        }
        let arrow = |id: &str, path: String| index.get(id).copied().ok_or_else(|| CliError::schema(path, format!("unknown arrow `{id}`")));
        let object = |id: &str, path: String| sp.point(id).map_err(|_| CliError::schema(path, format!("unknown object `{id}`")));
        let mut raw = RawGroupoid { objects: sp.names().to_vec(), ..Default::default() };
        for (i, a) in gj.arrows.iter().enumerate() {
            let s = object(&a.src, format!("groupoid.arrows[{i}].src"))?;
            let t = object(&a.tgt, format!("groupoid.arrows[{i}].tgt"))?;
            raw.arrows.push((a.id.clone(), s, t));
        }
        for (i, [f, g, fg]) in gj.compose.iter().enumerate() {
            let p = |k: usize| format!("groupoid.compose[{i}][{k}]");
            raw.compose.push((arrow(f, p(0))?, arrow(g, p(1))?, arrow(fg, p(2))?));
        }
        for (x, id) in &gj.identities {
            raw.identities.push((object(x, format!("groupoid.identities.{x}"))?, arrow(id, format!("groupoid.identities.{x}"))?));
        }
        for (f, inv) in &gj.inverses {
            raw.inverses.push((arrow(f, format!("groupoid.inverses.{f}"))?, arrow(inv, format!("groupoid.inverses.{f}"))?));
        }
        Groupoid::validate(raw).map_err(|e| CliError::classify("groupoid", e))
    }

    pub fn top_groupoid(&self, sp: &FinSpace, g: &Groupoid) -> CliResult<TopGroupoid> {
        let gj = require(&self.groupoid, "groupoid")?;
        match &gj.arrow_opens {
            Some(opens) => {
                let arrows = FinSpace::validate(g.arrow_names(), opens).map_err(|e| CliError::classify("groupoid.arrow_opens", e))?;
                TopGroupoid::new(g.clone(), arrows, sp.clone()).map_err(|e| CliError::classify("groupoid.arrow_opens", e))
            }
            None => TopGroupoid::product_topology(g.clone(), sp.clone(), |_, _| true).map_err(|e| CliError::classify("groupoid", e)),
        }
    }

    pub fn ambient(&self, sp: &FinSpace, g: &Groupoid) -> CliResult<Arc<Ambient>> {
        Ambient::new(sp.clone(), g.clone()).map_err(|e| CliError::classify("groupoid", e))
    }

    /// The presheaf tables; functoriality is left to the caller.
    pub fn presheaf(&self, sp: &FinSpace) -> CliResult<Presheaf> {
        let pj = require(&self.presheaf, "presheaf")?;
        let mut labels = Vec::new();
        for (key, set) in &pj.sets {
            labels.push((open_key(sp, key, &format!("presheaf.sets.{key}"))?, set.clone()));
        }
        let position = |u: Bits, label: &str, path: &str| {
            pj.sets
                .get(&sp.key(u))
                .and_then(|set| set.iter().position(|l| l == label))
                .ok_or_else(|| CliError::schema(path, format!("`{label}` is not in the set over {}", sp.key(u))))
        };
        let mut maps = Vec::new();
        for (i, r) in pj.restr.iter().enumerate() {
            let path = format!("presheaf.restr[{i}]");
            let u = open_key(sp, &r.from, &format!("{path}.from"))?;
            let v = open_key(sp, &r.to, &format!("{path}.to"))?;
            let size = pj.sets.get(&sp.key(u)).map_or(0, Vec::len);
            let mut table = vec![usize::MAX; size];
            for (from, to) in &r.map {
                let e = position(u, from, &format!("{path}.map"))?;
                table[e] = position(v, to, &format!("{path}.map.{from}"))?;
            }
            if let Some(e) = table.iter().position(|&t| t == usize::MAX) {
                return Err(CliError::schema(format!("{path}.map"), format!("no image for `{}`", pj.sets[&sp.key(u)][e])));
            }
            maps.push((u, v, table));
        }
        Presheaf::from_tables(sp, labels, maps).map_err(|e| CliError::classify("presheaf", e))
    }

    pub fn atlas(&self, amb: &Arc<Ambient>) -> CliResult<LocalSubgroupoid> {
        let charts = require(&self.atlas, "atlas")?;
        let mut out = Vec::new();
        for (i, c) in charts.iter().enumerate() {
            let u = point_set(&amb.space, &c.open, &format!("atlas[{i}].open"))?;
            let h = arrow_set(&amb.groupoid, &c.arrows, &format!("atlas[{i}].arrows"))?;
            out.push((u, h));
        }
        LocalSubgroupoid::new(amb, out).map_err(|e| CliError::classify("atlas", e))
    }
}

pub fn point_set(sp: &FinSpace, names: &[String], path: &str) -> CliResult<Bits> {
    let mut b = Bits::EMPTY;
    for (i, n) in names.iter().enumerate() {
        let x = sp.point(n).map_err(|_| CliError::schema(format!("{path}[{i}]"), format!("unknown point `{n}`")))?;
        b.insert(x);
    }
    Ok(b)
}

pub fn arrow_set(g: &Groupoid, names: &[String], path: &str) -> CliResult<Bits> {
    let mut b = Bits::EMPTY;
    for (i, n) in names.iter().enumerate() {
        let f = g.arrow(n).map_err(|_| CliError::schema(format!("{path}[{i}]"), format!("unknown arrow `{n}`")))?;
        b.insert(f);
    }
    Ok(b)
}

/// Resolves `[a,b]` to an open set.
pub fn open_key(sp: &FinSpace, key: &str, path: &str) -> CliResult<Bits> {
    let inner = key
        .strip_prefix('[')
        .and_then(|k| k.strip_suffix(']'))
        .ok_or_else(|| CliError::schema(path, format!("`{key}` is not of the form [a,b]")))?;
    let names: Vec<String> = if inner.trim().is_empty() { Vec::new() } else { inner.split(',').map(|s| s.trim().to_string()).collect() };
    let u = point_set(sp, &names, path)?;
    if !sp.is_open(u) {
        return Err(CliError::schema(path, format!("{key} is not open")));
    }
    Ok(u)
}

pub fn germ_id(sheaf: &EtaleSheaf, x: usize, e: usize) -> String {
    format!("{}:{}", sheaf.space().name(x), sheaf.element_label(x, e))
}

/// Germ id to `(point, element)`.
pub fn germ_index(sheaf: &EtaleSheaf) -> HashMap<String, (usize, usize)> {
    (0..sheaf.space().len()).flat_map(|x| (0..sheaf.stalk_size(x)).map(move |e| (germ_id(sheaf, x, e), (x, e)))).collect()
}

/// An action table from rows. Rows must name arrows of `g` and germs over their
/// sources; a result over the wrong point is kept so the square law can report it.
pub fn action_from_rows(g: &Groupoid, sheaf: &EtaleSheaf, rows: &[ActionRow], path: &str) -> CliResult<(GroupoidAction, Vec<String>)> {
    let germs = germ_index(sheaf);
    let mut arrows = Bits::EMPTY;
    let mut maps: Vec<Vec<usize>> = vec![Vec::new(); g.arrow_count()];
    for (i, row) in rows.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let f = g.arrow(&row.arrow).map_err(|_| CliError::schema(format!("{p}.arrow"), format!("unknown arrow `{}`", row.arrow)))?;
        let &(x, e) = germs.get(&row.germ).ok_or_else(|| CliError::schema(format!("{p}.germ"), format!("unknown germ `{}`", row.germ)))?;
        if x != g.src(f) {
            return Err(CliError::schema(format!("{p}.germ"), format!("`{}` is not over the source of `{}`", row.germ, row.arrow)));
        }
        let &(y, e2) = germs.get(&row.result).ok_or_else(|| CliError::schema(format!("{p}.result"), format!("unknown germ `{}`", row.result)))?;
        if !arrows.contains(f) {
            arrows.insert(f);
            maps[f] = vec![usize::MAX; sheaf.stalk_size(x)];
        }
        if maps[f][e] != usize::MAX {
            return Err(CliError::schema(p, format!("second row for `{}` on `{}`", row.arrow, row.germ)));
        }
        maps[f][e] = if y == g.tgt(f) { e2 } else { sheaf.stalk_size(g.tgt(f)) };
    }
    let mut missing = Vec::new();
    for f in arrows.iter() {
        for (e, &m) in maps[f].iter().enumerate() {
            if m == usize::MAX {
                missing.push(format!("{} on {}", g.arrow_name(f), germ_id(sheaf, g.src(f), e)));
            }
        }
    }
    Ok((GroupoidAction { arrows, maps }, missing))
}

pub fn action_rows(g: &Groupoid, sheaf: &EtaleSheaf, act: &GroupoidAction) -> Vec<ActionRow> {
    act.arrows
        .iter()
        .flat_map(|f| {
            act.maps[f].iter().enumerate().map(move |(e, &e2)| ActionRow {
                arrow: g.arrow_name(f).to_string(),
                germ: germ_id(sheaf, g.src(f), e),
                result: germ_id(sheaf, g.tgt(f), e2),
            })
        })
        .collect()
}

pub fn space_json(sp: &FinSpace) -> SpaceJson {
    SpaceJson { points: sp.names().to_vec(), opens: sp.opens().iter().map(|&u| sp.points_of(u)).collect() }
}

/// Full tables of `tg`. The arrow topology is written out only when asked for; left
/// out, readers rebuild the product topology.
pub fn groupoid_json(tg: &TopGroupoid, with_opens: bool) -> GroupoidJson {
    let g = &tg.groupoid;
    let name = |f: usize| g.arrow_name(f).to_string();
    let all = g.all_arrows();
    let mut compose = Vec::new();
    for f in all.iter() {
        for h in all.iter() {
            if let Some(fh) = g.compose(f, h) {
                compose.push([name(f), name(h), name(fh)]);
            }
        }
    }
    GroupoidJson {
        arrows: all.iter().map(|f| ArrowJson { id: name(f), src: g.objects()[g.src(f)].clone(), tgt: g.objects()[g.tgt(f)].clone() }).collect(),
        compose,
        identities: (0..g.object_count()).map(|x| (g.objects()[x].clone(), name(g.identity(x)))).collect(),
        inverses: all.iter().map(|f| (name(f), name(g.inverse(f)))).collect(),
        arrow_opens: with_opens.then(|| tg.arrows.opens().iter().map(|&u| u.iter().map(name).collect()).collect()),
    }
}

pub fn presheaf_json(p: &Presheaf) -> PresheafJson {
    let sp = p.space();
    let opens = sp.opens();
    let sets = opens.iter().map(|&u| (sp.key(u), p.labels_of(u))).collect();
    let mut restr = Vec::new();
    for &u in opens {
        for &v in opens.iter().filter(|&&v| v != u && v.is_subset(u)) {
            let map = (0..p.size(u)).map(|e| (p.label(u, e), p.label(v, p.restrict(u, v, e)))).collect();
            restr.push(RestrJson { from: sp.key(u), to: sp.key(v), map });
        }
    }
    PresheafJson { sets, restr }
}

pub fn atlas_json(s: &LocalSubgroupoid) -> Vec<ChartJson> {
    s.charts().iter().map(|&(u, h)| ChartJson { open: s.space().points_of(u), arrows: s.groupoid().arrow_list(h) }).collect()
}
