//! The canonical fixture set shipped with the repository.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fixtures::{pair_ruth, z2_ruth, z2_ruth_broken4};
use crate::groupoid::FiniteGroupoid;
use crate::harness::gen::{random_scramble, random_vb, trial_rng};
use crate::harness::instance::{Instance, InstanceFile, VbMapSpec, Witness};
use crate::linalg::q;
use crate::ruth::Ruth;
use crate::semidirect::semidirect;
use crate::wrep::wrep_from_ruth;

/// Seed of the scrambled variants.
pub const FIXTURE_SEED: u64 = 2024;

fn meta(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Every fixture as `(file name, contents)`, in a fixed order.
pub fn fixture_set() -> Result<Vec<(String, InstanceFile)>> {
    let mut out = Vec::new();
    let mut add = |name: &str, i: Instance, m: BTreeMap<String, Value>| out.push((format!("{name}.json"), i.to_file(m)));
    add("z2", Instance::Groupoid(Arc::new(FiniteGroupoid::cyclic(2))), BTreeMap::new());
    add("pair", Instance::Groupoid(Arc::new(FiniteGroupoid::pair_xy())), BTreeMap::new());
    add("z2-ruth-broken4", Instance::Ruth(Arc::new(z2_ruth_broken4())), BTreeMap::new());

    let reps: [(&str, Ruth); 3] = [("z2-ruth-0", z2_ruth(q(0))), ("z2-ruth-1", z2_ruth(q(1))), ("pair-ruth", pair_ruth())];
    for (t, (name, r)) in reps.into_iter().enumerate() {
        let r = Arc::new(r);
        add(name, Instance::Ruth(r.clone()), BTreeMap::new());
        let path = |to: &str| meta(&[("path", json!(["ruth", to]))]);
        add(&format!("{name}-vb"), Instance::Vb(Arc::new(semidirect(&r)?)), path("vb"));
        let w = Arc::new(wrep_from_ruth(&r)?);
        add(&format!("{name}-wrep"), Instance::Wrep(w.clone()), path("wrep"));

        let mut rng = trial_rng(FIXTURE_SEED, t as u64);
        let (v, iso) = random_vb(&mut rng, &r)?;
        let witness = serde_json::to_value(Witness::VbMap(VbMapSpec::of(&iso))).expect("witness serializes");
        let m = meta(&[("seed", json!(FIXTURE_SEED)), ("trial", json!(t)), ("scrambled-from", json!(format!("{name}-vb"))), ("witness", witness)]);
        add(&format!("{name}-vb-scrambled"), Instance::Vb(v), m);
        let (w2, e) = random_scramble(&mut rng, &w)?;
        let witness = serde_json::to_value(Witness::Equivariant(e.to_spec())).expect("witness serializes");
        let m = meta(&[("seed", json!(FIXTURE_SEED)), ("trial", json!(t)), ("scrambled-from", json!(format!("{name}-wrep"))), ("witness", witness)]);
        add(&format!("{name}-wrep-scrambled"), Instance::Wrep(w2), m);
    }
    Ok(out)
}

/// Writes the fixture set into `dir`, creating it if needed.
pub fn write_fixtures(dir: &Path) -> Result<Vec<PathBuf>> {
    let io = |e: std::io::Error| Error::Usage(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    fixture_set()?
        .into_iter()
        .map(|(name, f)| {
            let p = dir.join(name);
            std::fs::write(&p, f.to_json()).map_err(io)?;
            Ok(p)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::instance::recorded_witness;

    fn shipped() -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
    }

    #[test]
    fn shipped_fixtures_match_the_generator() {
        for (name, f) in fixture_set().unwrap() {
            let on_disk = std::fs::read_to_string(shipped().join(&name)).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(on_disk, f.to_json(), "{name} is stale");
        }
    }

    #[test]
    fn fixtures_validate_except_the_broken_one() {
        for (name, f) in fixture_set().unwrap() {
            let i = Instance::from_file(&f).unwrap();
            assert_eq!(i.validate().passed(), name != "z2-ruth-broken4.json", "{name}");
            if let Some(w) = recorded_witness(&f).unwrap() {
                assert!(w.validate().unwrap().passed(), "{name}");
            }
        }
    }
}
