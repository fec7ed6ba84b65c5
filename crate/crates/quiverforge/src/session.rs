//! In-memory mutation sessions with undo.

use std::collections::HashMap;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::Serialize;
use sha2::{Digest, Sha256};

use quiverforge_core::{MutationSequence, Quiver};

use crate::ops::{render, OpError, OpResult};

/// SHA-256 of the quiver's JSON, in hex.
pub fn snapshot_hash(q: &Quiver) -> String {
    Sha256::digest(render(q).as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HistoryEntry {
    pub step: MutationSequence,
    pub hash: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SessionRecord {
    pub id: String,
    pub base_quiver: Quiver,
    pub history: Vec<HistoryEntry>,
    /// The quiver after the whole history.
    pub quiver: Quiver,
    pub hash: String,
}

impl SessionRecord {
    pub fn new(id: String, base: Quiver) -> Self {
        let hash = snapshot_hash(&base);
        SessionRecord { id, quiver: base.clone(), base_quiver: base, history: Vec::new(), hash }
    }

    pub fn mutate(&mut self, step: MutationSequence) -> OpResult<()> {
        let next = self.quiver.apply_sequence(&step)?;
        self.hash = snapshot_hash(&next);
        self.history.push(HistoryEntry { step, hash: self.hash.clone() });
        self.quiver = next;
        Ok(())
    }

    pub fn undo(&mut self) -> OpResult<()> {
        let Some(last) = self.history.pop() else {
            return Err(OpError::Invalid("nothing to undo".into()));
        };
        // mutation is an involution, so replaying the step backwards undoes it
        self.quiver = self.quiver.apply_sequence(&last.step.reversed())?;
        self.hash = snapshot_hash(&self.quiver);
        Ok(())
    }

    /// Whether replaying the history from the base reproduces every stored
    /// hash and the current quiver.
    pub fn replays(&self) -> bool {
        let mut q = self.base_quiver.clone();
        for entry in &self.history {
            q = match q.apply_sequence(&entry.step) {
                Ok(next) => next,
                Err(_) => return false,
            };
            if snapshot_hash(&q) != entry.hash {
                return false;
            }
        }
        q == self.quiver && snapshot_hash(&q) == self.hash
    }
}

struct Slot {
    record: SessionRecord,
    touched: Instant,
}

/// Sessions expire `ttl` after their last use.
pub struct SessionStore {
    ttl: Duration,
    slots: Mutex<HashMap<String, Slot>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SessionError {
    #[error("unknown session {0}")]
    NotFound(String),
    #[error(transparent)]
    Op(#[from] OpError),
}

impl SessionStore {
    pub fn new(ttl: Duration) -> Self {
        SessionStore { ttl, slots: Mutex::new(HashMap::new()) }
    }

    fn purge(&self, slots: &mut HashMap<String, Slot>, now: Instant) {
        slots.retain(|_, s| now.duration_since(s.touched) < self.ttl);
    }

    pub fn create(&self, base: Quiver) -> SessionRecord {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let record = SessionRecord::new(id.clone(), base);
        let now = Instant::now();
        let mut slots = self.slots.lock().expect("session lock");
        self.purge(&mut slots, now);
        slots.insert(id, Slot { record: record.clone(), touched: now });
        record
    }

    /// Run `f` on a live session and return its new state.
    pub fn update(
        &self,
        id: &str,
        f: impl FnOnce(&mut SessionRecord) -> OpResult<()>,
    ) -> Result<SessionRecord, SessionError> {
        let now = Instant::now();
        let mut slots = self.slots.lock().expect("session lock");
        self.purge(&mut slots, now);
        let slot = slots.get_mut(id).ok_or_else(|| SessionError::NotFound(id.to_string()))?;
        slot.touched = now;
        let mut draft = slot.record.clone();
        f(&mut draft)?;
        slot.record = draft;
        Ok(slot.record.clone())
    }

    pub fn get(&self, id: &str) -> Result<SessionRecord, SessionError> {
        self.update(id, |_| Ok(()))
    }

    pub fn len(&self) -> usize {
        let mut slots = self.slots.lock().expect("session lock");
        self.purge(&mut slots, Instant::now());
        slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use quiverforge_core::generate::{path_quiver, random_quiver};
    use quiverforge_core::VertexId;

    fn step(ids: &[u32]) -> MutationSequence {
        ids.iter().map(|&i| VertexId::new(i)).collect()
    }

    #[test]
    fn hashes_are_hex_sha256() {
        let h = snapshot_hash(&path_quiver(2));
        assert_eq!(h.len(), 64);
        assert!(h.chars().all(|c| c.is_ascii_hexdigit()));
        assert_ne!(h, snapshot_hash(&path_quiver(3)));
    }

    #[test]
    fn mutate_then_undo_restores_the_base() {
        let mut s = SessionRecord::new("x".into(), random_quiver(5, 2, 1));
        s.mutate(step(&[1, 3])).unwrap();
        s.mutate(step(&[2])).unwrap();
        assert!(s.replays());
        s.undo().unwrap();
        s.undo().unwrap();
        assert_eq!(s.quiver, s.base_quiver);
        assert!(s.history.is_empty());
        assert!(s.undo().is_err());
    }

    #[test]
    fn failed_steps_leave_the_session_alone() {
        let store = SessionStore::new(Duration::from_secs(60));
        let rec = store.create(path_quiver(3));
        let err = store.update(&rec.id, |s| s.mutate(step(&[7]))).unwrap_err();
        assert!(matches!(err, SessionError::Op(OpError::Invalid(_))));
        assert!(store.get(&rec.id).unwrap().history.is_empty());
        assert!(matches!(store.get("nope"), Err(SessionError::NotFound(_))));
    }

    #[test]
    fn sessions_expire() {
        let store = SessionStore::new(Duration::ZERO);
        let rec = store.create(path_quiver(2));
        assert!(matches!(store.get(&rec.id), Err(SessionError::NotFound(_))));
        assert!(store.is_empty());
    }
}
