//! Injection structure with infinitely many ℤ-orbits, where the orbit of `2^e`
//! is Turing equivalent to `W_e`.
//!
//! The universe is `{2^e 3^i 5^j, 2^e 3^i 7^j}`. Writing `[e, i, k]` for
//! `2^e 3^i 5^{-k}` when `k ≤ 0` and `2^e 3^i 7^k` when `k ≥ 0`, every orbit
//! runs `… ↦ [e,i,-1] ↦ [e,i,0] ↦ [e,i,1] ↦ …` until `i-1` enters `W_e`:
//! then the orbit of `[e,i,0]` is spliced onto the end of the orbit of
//! `[e,0,0]`, which afterwards keeps collecting two elements of every spliced
//! orbit per stage. So `i ∈ W_e` iff `[e,i+1,0]` lies in the orbit of `[e,0,0]`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde_json::json;

use super::{Construction, Kind, Schedule, StageSnapshot, StageCheck};
use crate::error::{Error, Result};
use crate::structure::FiniteStructure;

type Elt = (u64, u64, i64);

fn label((e, i, k): Elt) -> String {
    if k < 0 {
        format!("2^{e}*3^{i}*5^{}", -k)
    } else {
        format!("2^{e}*3^{i}*7^{k}")
    }
}

fn parse_label(l: &str) -> Option<Elt> {
    let mut it = l.split('*');
    let e = it.next()?.strip_prefix("2^")?.parse().ok()?;
    let i = it.next()?.strip_prefix("3^")?.parse().ok()?;
    let last = it.next()?;
    if it.next().is_some() {
        return None;
    }
    let k: i64 = if let Some(j) = last.strip_prefix("5^") {
        -j.parse::<i64>().ok()?
    } else {
        last.strip_prefix("7^")?.parse().ok()?
    };
    Some((e, i, k))
}

/// The orbits for one `e`.
struct Family {
    e: u64,
    main: VecDeque<Elt>,
    /// Orbits of `[e, i, 0]` not yet spliced, keyed by `i ≥ 1`.
    aux: BTreeMap<u64, VecDeque<Elt>>,
    spliced: Vec<u64>,
}

pub(super) struct Degrees {
    fams: Vec<Family>,
    ids: HashMap<Elt, usize>,
    order: Vec<Elt>,
}

impl Degrees {
    pub fn new(count: usize) -> Self {
        let mut d = Degrees {
            fams: Vec::new(),
            ids: HashMap::new(),
            order: Vec::new(),
        };
        for e in 0..count as u64 {
            d.register((e, 0, 0));
            d.register((e, 0, 1));
            d.fams.push(Family {
                e,
                main: VecDeque::from([(e, 0, 0), (e, 0, 1)]),
                aux: BTreeMap::new(),
                spliced: Vec::new(),
            });
        }
        d
    }

    fn register(&mut self, x: Elt) {
        if !self.ids.contains_key(&x) {
            self.ids.insert(x, self.order.len());
            self.order.push(x);
        }
    }

    fn step_all(&mut self, s1: u64, ws: &[&Schedule]) {
        let s = s1 as i64 - 1;
        let mut fresh = Vec::new();
        for (fam, w) in self.fams.iter_mut().zip(ws) {
            let e = fam.e;
            // The new orbit of [e, s+1, 0] starts out in the shape every
            // other orbit has after stage s.
            let new: VecDeque<Elt> = (-s..=s + 1).map(|k| (e, s1, k)).collect();
            fresh.extend(new.iter().copied());
            fam.aux.insert(s1, new);
            let entering = w.entering(s1);
            let splice = entering.map(|i| fam.aux.remove(&(i + 1)).expect("orbit exists for i ≤ s"));
            for orbit in fam.aux.values_mut() {
                let i = orbit[0].1;
                orbit.push_front((e, i, -(s + 1)));
                orbit.push_back((e, i, s + 2));
                fresh.extend([orbit[0], orbit[orbit.len() - 1]]);
            }
            fam.main.push_front((e, 0, -(s + 1)));
            fresh.push((e, 0, -(s + 1)));
            if let (Some(i), Some(orbit)) = (entering, splice) {
                fam.main.extend(orbit);
                fam.spliced.push(i);
            }
            for i in w.enumerated_by(s1) {
                for x in [(e, i + 1, -(s + 1)), (e, i + 1, s + 2)] {
                    fam.main.push_back(x);
                    fresh.push(x);
                }
            }
            fam.main.push_back((e, 0, s + 2));
            fresh.push((e, 0, s + 2));
        }
        for x in fresh {
            self.register(x);
        }
    }

    fn structure(&self) -> Result<FiniteStructure> {
        let mut f = vec![None; self.order.len()];
        for fam in &self.fams {
            for path in std::iter::once(&fam.main).chain(fam.aux.values()) {
                for (a, b) in path.iter().zip(path.iter().skip(1)) {
                    f[self.ids[a]] = Some(self.ids[b]);
                }
            }
        }
        Ok(FiniteStructure::partial_injection(f)?.with_labels(self.order.iter().map(|&x| label(x)).collect()))
    }
}

impl Construction for Degrees {
    fn step(&mut self, s: u64, w: &Schedule) {
        self.step_all(s, &[w]);
    }

    fn snapshot(&self, _s: u64, _w: &Schedule) -> Result<(FiniteStructure, serde_json::Value)> {
        let lengths: Vec<usize> = self.fams.iter().map(|f| f.main.len()).collect();
        let spliced: Vec<&Vec<u64>> = self.fams.iter().map(|f| &f.spliced).collect();
        Ok((self.structure()?, json!({"orbit_lengths": lengths, "spliced": spliced})))
    }
}

fn check_schedules(e_max: usize, ws: &[Schedule]) -> Result<()> {
    if ws.len() != e_max + 1 {
        return Err(Error::input(
            "schedules",
            format!("expected {} schedules for e = 0..={e_max}, got {}", e_max + 1, ws.len()),
        ));
    }
    for (e, w) in ws.iter().enumerate() {
        w.check_bounded().map_err(|err| match err {
            Error::Input { message, .. } => Error::input(format!("schedules[{e}]"), message),
            other => other,
        })?;
    }
    Ok(())
}

/// The structure after `stages` stages, with one schedule for each `e ≤ e_max`.
pub fn build_inj_degrees(e_max: usize, ws: &[Schedule], stages: u64) -> Result<StageSnapshot> {
    check_schedules(e_max, ws)?;
    let refs: Vec<&Schedule> = ws.iter().collect();
    let mut d = Degrees::new(e_max + 1);
    for s in 1..=stages {
        d.step_all(s, &refs);
    }
    let (structure, metadata) = d.snapshot(stages, &ws[0])?;
    Ok(StageSnapshot {
        kind: Kind::InjDegrees,
        stage: stages,
        structure,
        metadata,
    })
}

/// Checks the membership invariant `i ∈ W_{e,s} ⇔ [e,i+1,0] ∈ O_s([e,0,0])`,
/// the ends of each orbit of `[e,0,0]`, and that orbits are finite paths.
pub fn check_inj_degrees(snap: &StageSnapshot, ws: &[Schedule]) -> Result<StageCheck> {
    if snap.kind != Kind::InjDegrees {
        return Err(Error::input("kind", format!("snapshot was built by {}, not INJ_DEGREES", snap.kind)));
    }
    check_schedules(ws.len().saturating_sub(1), ws)?;
    let mut out = Vec::new();
    check(snap, ws, &mut out);
    Ok(StageCheck {
        holds: out.is_empty(),
        violations: out,
    })
}

pub(super) fn check(snap: &StageSnapshot, ws: &[Schedule], out: &mut Vec<String>) {
    let s = snap.stage as i64;
    let st = &snap.structure;
    let n = st.size();
    let mut elts = Vec::with_capacity(n);
    for x in 0..n {
        match parse_label(&st.label(x)) {
            Some(t) => elts.push(t),
            None => {
                out.push(format!("label {} is not of the form 2^e*3^i*5^j or 2^e*3^i*7^j", st.label(x)));
                return;
            }
        }
    }
    let id: HashMap<Elt, usize> = elts.iter().enumerate().map(|(x, &t)| (t, x)).collect();
    let f = &st.functions()[0];
    let mut pre = vec![None; n];
    for (x, y) in f.iter().enumerate() {
        if let Some(y) = y {
            pre[*y] = Some(x);
        }
    }
    for &(e, i, k) in &elts {
        if e as usize >= ws.len() || i as i64 > s || k < -s || k > s + 2 {
            out.push(format!("{} should not exist at stage {s}", label((e, i, k))));
        }
    }
    for (e, w) in ws.iter().enumerate() {
        let e = e as u64;
        let Some(&root) = id.get(&(e, 0, 0)) else {
            out.push(format!("{} is missing", label((e, 0, 0))));
            continue;
        };
        let mut orbit = vec![false; n];
        orbit[root] = true;
        let (mut first, mut last) = (root, root);
        while let Some(y) = f[last] {
            if orbit[y] {
                out.push(format!("the orbit of {} is a cycle", label((e, 0, 0))));
                return;
            }
            orbit[y] = true;
            last = y;
        }
        while let Some(y) = pre[first] {
            orbit[y] = true;
            first = y;
        }
        if elts[first] != (e, 0, -s) || elts[last] != (e, 0, s + 1) {
            out.push(format!(
                "orbit of {} runs from {} to {}",
                label((e, 0, 0)),
                label(elts[first]),
                label(elts[last])
            ));
        }
        for i in 0..s as u64 {
            let member = id.get(&(e, i + 1, 0)).is_some_and(|&x| orbit[x]);
            if member != w.contains_by(i, s as u64) {
                out.push(format!("{i} ∈ W_{{{e},{s}}} is {} but the orbit test says {member}", !member));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orbit_of(snap: &StageSnapshot, l: &str) -> Vec<String> {
        let st = &snap.structure;
        let mut x = (0..st.size()).find(|&x| st.label(x) == l).unwrap();
        let f = &st.functions()[0];
        while let Some(p) = (0..st.size()).find(|&p| f[p] == Some(x)) {
            x = p;
        }
        let mut v = vec![st.label(x)];
        while let Some(y) = f[x] {
            x = y;
            v.push(st.label(x));
        }
        v
    }

    #[test]
    fn stage_zero() {
        let ws = vec![Schedule::empty(), Schedule::empty()];
        let snap = build_inj_degrees(1, &ws, 0).unwrap();
        assert_eq!(snap.structure.size(), 4);
        assert_eq!(orbit_of(&snap, "2^0*3^0*7^0"), vec!["2^0*3^0*7^0", "2^0*3^0*7^1"]);
        assert_eq!(orbit_of(&snap, "2^1*3^0*7^0"), vec!["2^1*3^0*7^0", "2^1*3^0*7^1"]);
    }

    #[test]
    fn single_splice() {
        let ws = vec![Schedule::new([(0, 1)]).unwrap()];
        let snap = build_inj_degrees(0, &ws, 1).unwrap();
        // 5 ↦ 1 ↦ 7, then the stage-0 orbit of 3 (just 3 ↦ 21), then the two
        // new elements of that orbit, then 7^2.
        assert_eq!(
            orbit_of(&snap, "2^0*3^0*7^0"),
            vec![
                "2^0*3^0*5^1",
                "2^0*3^0*7^0",
                "2^0*3^0*7^1",
                "2^0*3^1*7^0",
                "2^0*3^1*7^1",
                "2^0*3^1*5^1",
                "2^0*3^1*7^2",
                "2^0*3^0*7^2"
            ]
        );
        assert!(check_inj_degrees(&snap, &ws).unwrap().holds);
        assert!(!check_inj_degrees(&snap, &[Schedule::empty()]).unwrap().holds);
    }

    #[test]
    fn invariant_over_stages() {
        let ws = vec![
            Schedule::new([(0, 2), (3, 5), (1, 6)]).unwrap(),
            Schedule::new([(2, 3), (0, 4)]).unwrap(),
        ];
        for s in 0..=12 {
            let snap = build_inj_degrees(1, &ws, s).unwrap();
            let v = check_inj_degrees(&snap, &ws).unwrap();
            assert!(v.holds, "stage {s}: {:?}", v.violations);
        }
    }

    #[test]
    fn schedule_count_must_match() {
        assert_eq!(build_inj_degrees(1, &[Schedule::empty()], 0).unwrap_err().kind(), "input");
        let bad = Schedule::new([(3, 2)]).unwrap();
        assert_eq!(build_inj_degrees(0, &[bad], 3).unwrap_err().kind(), "input");
    }
}
