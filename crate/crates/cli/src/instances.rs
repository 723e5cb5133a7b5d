//! The instance files shipped under `instances/`, built from library constructors
//! so the tables are complete and consistent.

use localgpd::groupoid::{FinGroup, Groupoid, TopGroupoid};
use localgpd::localsub::{Ambient, LocalSubgroupoid};
use localgpd::presheaf::Presheaf;
use localgpd::{Bits, FinSpace};

use crate::schema::{action_rows, atlas_json, groupoid_json, presheaf_json, space_json, ActionRow, InstanceFile, SCHEMA_VERSION};

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn base(sp: &FinSpace) -> InstanceFile {
    InstanceFile { version: SCHEMA_VERSION, space: space_json(sp), ..Default::default() }
}

/// Arrows of `g` inside the blocks of a partition of some objects.
fn relation(g: &Groupoid, blocks: &[Bits]) -> Bits {
    (0..g.arrow_count()).filter(|&f| blocks.iter().any(|b| b.contains(g.src(f)) && b.contains(g.tgt(f)))).collect()
}

/// Opens `∅, {2}, {1,2}, {2,3}, X` on `{1,2,3}`.
pub fn line() -> FinSpace {
    FinSpace::from_nbhds(names(&["1", "2", "3"]), vec![Bits(0b011), Bits(0b010), Bits(0b110)]).expect("line")
}

/// `y` and `z` open points whose only neighbourhood of `x` is the whole space:
/// opens `∅, {y}, {z}, {y,z}, X`.
pub fn vee() -> FinSpace {
    FinSpace::from_nbhds(names(&["x", "y", "z"]), vec![Bits(0b111), Bits(0b010), Bits(0b100)]).expect("vee")
}

fn with_labels(p: Presheaf, label: impl Fn(Bits, usize) -> String) -> Presheaf {
    let labels = p.space().opens().iter().map(|&u| (0..p.size(u)).map(|e| label(u, e)).collect()).collect();
    p.with_labels(labels)
}

/// On discrete `{1,2,3}`: the equivalence relations generated by full `{1,2}`,
/// full `{2,3}` and the diagonal on `{1,3}`, with nothing over the whole space.
pub fn e_noglue() -> InstanceFile {
    let sp = FinSpace::discrete(3);
    let whole = sp.whole();
    let p = Presheaf::from_fn(&sp, |u| if u == whole { 0 } else { 1 }, |_, _, _| 0);
    let p = with_labels(p, |u, _| match u.0 {
        0b011 | 0b110 => "full".into(),
        0b101 => "diag".into(),
        _ => "triv".into(),
    });
    InstanceFile { presheaf: Some(presheaf_json(&p)), ..base(&sp) }
}

/// Two charts, the full relation on `{1,2}` and on `{2,3}`, over the line.
pub fn two_full_charts() -> InstanceFile {
    let sp = line();
    let tg = TopGroupoid::pair(&sp);
    let amb = Ambient::pair(&sp);
    let g = &amb.groupoid;
    let (a, b) = (Bits(0b011), Bits(0b110));
    let s = LocalSubgroupoid::new(&amb, vec![(a, g.restrict_full(a)), (b, g.restrict_full(b))]).expect("compatible");
    InstanceFile { groupoid: Some(groupoid_json(&tg, false)), atlas: Some(atlas_json(&s)), ..base(&sp) }
}

/// Two-valued functions on the Sierpinski space: a sheaf.
pub fn sierpinski_functions() -> InstanceFile {
    let sp = FinSpace::sierpinski();
    let p = Presheaf::functions(&sp, 2);
    let p = with_labels(p, |u, e| {
        let digits: Vec<String> = u.iter().enumerate().map(|(i, x)| format!("{}{}", sp.name(x), (e >> i) & 1)).collect();
        if digits.is_empty() {
            "nil".into()
        } else {
            digits.join("")
        }
    });
    InstanceFile { presheaf: Some(presheaf_json(&p)), ..base(&sp) }
}

/// The constant presheaf with two elements on the Sierpinski space, `∅` included.
pub fn sierpinski_constant() -> InstanceFile {
    let sp = FinSpace::sierpinski();
    let p = with_labels(Presheaf::constant(&sp, 2), |_, e| ["p", "q"][e].into());
    InstanceFile { presheaf: Some(presheaf_json(&p)), ..base(&sp) }
}

/// The diagonal atlas on the line: strictly regular, holonomy is the null groupoid.
pub fn diagonal_line() -> InstanceFile {
    let sp = line();
    let tg = TopGroupoid::pair(&sp);
    let amb = Ambient::pair(&sp);
    let s = LocalSubgroupoid::loc(&amb, amb.groupoid.identities()).expect("wide");
    InstanceFile { groupoid: Some(groupoid_json(&tg, false)), atlas: Some(atlas_json(&s)), ..base(&sp) }
}

/// Pair groupoid on discrete `{1,2}` with discrete arrows, `H = W = G`.
pub fn discrete_pair() -> InstanceFile {
    let sp = FinSpace::discrete(2);
    let g = Groupoid::pair(sp.names());
    let all = g.arrow_list(g.all_arrows());
    let tg = TopGroupoid::new(g, FinSpace::discrete(4), sp.clone()).expect("discrete arrows");
    InstanceFile { groupoid: Some(groupoid_json(&tg, true)), subgroupoid: Some(all.clone()), neighbourhood: Some(all), ..base(&sp) }
}

/// Pair groupoid on the Sierpinski space, `H = W = G`: fails the section condition.
pub fn sierpinski_pair() -> InstanceFile {
    let sp = FinSpace::sierpinski();
    let tg = TopGroupoid::pair(&sp);
    let all = tg.groupoid.arrow_list(tg.groupoid.all_arrows());
    InstanceFile { groupoid: Some(groupoid_json(&tg, false)), subgroupoid: Some(all.clone()), neighbourhood: Some(all), ..base(&sp) }
}

/// A single chart, the relation `{x}, {y,z}` on the vee: coherent, and its leaves
/// are not the transitivity components of `glob`.
pub fn vee_leaves() -> InstanceFile {
    let sp = vee();
    let tg = TopGroupoid::pair(&sp);
    let amb = Ambient::pair(&sp);
    let h = relation(&amb.groupoid, &[Bits(0b001), Bits(0b110)]);
    let s = LocalSubgroupoid::loc(&amb, h).expect("wide");
    InstanceFile { groupoid: Some(groupoid_json(&tg, false)), atlas: Some(atlas_json(&s)), ..base(&sp) }
}

/// One point, `X × X × Z/2`, constant sheaf with two germs: two transports.
pub fn isotropy_z2() -> InstanceFile {
    let sp = FinSpace::discrete(1);
    let g = Groupoid::pair_with_group(sp.names(), &FinGroup::cyclic(2));
    let tg = TopGroupoid::product_topology(g.clone(), sp.clone(), |a, b| a % 2 == b % 2).expect("topological");
    let amb = Ambient::new(sp.clone(), g.clone()).expect("same objects");
    let s = LocalSubgroupoid::loc(&amb, g.all_arrows()).expect("wide");
    let p = with_labels(Presheaf::constant(&sp, 2), |_, e| ["p", "q"][e].into());
    InstanceFile { groupoid: Some(groupoid_json(&tg, true)), atlas: Some(atlas_json(&s)), presheaf: Some(presheaf_json(&p)), ..base(&sp) }
}

fn indiscrete_with(swap: bool) -> InstanceFile {
    let sp = FinSpace::indiscrete(2);
    let tg = TopGroupoid::pair(&sp);
    let g = &tg.groupoid;
    let amb = Ambient::pair(&sp);
    let s = LocalSubgroupoid::loc(&amb, g.all_arrows()).expect("wide");
    let p = with_labels(Presheaf::constant(&sp, 2), |_, e| ["p", "q"][e].into());
    let sheaf = p.sheafify();
    let act = localgpd::gsheaf::GroupoidAction::from_fn(g, &sheaf, g.all_arrows(), |f, e| if swap && !g.is_identity(f) { 1 - e } else { e });
    let rows: Vec<ActionRow> = action_rows(g, &sheaf, &act);
    InstanceFile {
        groupoid: Some(groupoid_json(&tg, false)),
        atlas: Some(atlas_json(&s)),
        presheaf: Some(presheaf_json(&p)),
        action: Some(rows.clone()),
        transport: Some(vec![crate::schema::TransportChart { open: sp.names().to_vec(), arrows: g.arrow_list(g.all_arrows()), action: rows }]),
        ..base(&sp)
    }
}

/// Indiscrete `{1,2}`, constant sheaf, arrows keep labels: a continuous action and a transport.
pub fn indiscrete_action() -> InstanceFile {
    indiscrete_with(false)
}

/// The same with labels swapped along `(1,2)` and `(2,1)`: an action, not a continuous one.
pub fn indiscrete_swap() -> InstanceFile {
    indiscrete_with(true)
}

/// Four points with `N(3) = {1,2,3}` and `N(4) = {1,2,4}`; the germ at 3 is the diagonal
/// and the germ at 4 joins 1 and 2. Not globally coherent.
pub fn noncoherent_four() -> InstanceFile {
    let sp = FinSpace::from_nbhds(names(&["1", "2", "3", "4"]), vec![Bits(0b0001), Bits(0b0010), Bits(0b0111), Bits(0b1011)]).expect("preorder");
    let tg = TopGroupoid::pair(&sp);
    let amb = Ambient::pair(&sp);
    let g = &amb.groupoid;
    let germs = vec![
        g.identities_of(Bits(0b0001)),
        g.identities_of(Bits(0b0010)),
        g.identities_of(Bits(0b0111)),
        relation(g, &[Bits(0b0011), Bits(0b1000)]),
    ];
    let s = LocalSubgroupoid::from_germs(&amb, &germs).expect("compatible germs");
    InstanceFile { groupoid: Some(groupoid_json(&tg, false)), atlas: Some(atlas_json(&s)), ..base(&sp) }
}

/// File name and contents of every shipped instance.
pub fn all() -> Vec<(&'static str, InstanceFile)> {
    vec![
        ("e_noglue.json", e_noglue()),
        ("two_full_charts.json", two_full_charts()),
        ("sierpinski_functions.json", sierpinski_functions()),
        ("sierpinski_constant.json", sierpinski_constant()),
        ("diagonal_line.json", diagonal_line()),
        ("discrete_pair.json", discrete_pair()),
        ("sierpinski_pair.json", sierpinski_pair()),
        ("vee_leaves.json", vee_leaves()),
        ("isotropy_z2.json", isotropy_z2()),
        ("indiscrete_action.json", indiscrete_action()),
        ("indiscrete_swap.json", indiscrete_swap()),
        ("noncoherent_four.json", noncoherent_four()),
    ]
}
