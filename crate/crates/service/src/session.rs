//! In-memory sessions with idle expiry.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use oqb_core::{Ontology, QueryGraph};

use crate::error::ApiError;

#[derive(Debug)]
pub struct Session {
    pub ontology: Option<Arc<Ontology>>,
    pub graph: QueryGraph,
    pub created_at: Instant,
}

#[derive(Debug)]
struct Entry {
    session: Arc<Mutex<Session>>,
    last_used: Instant,
}

/// Session table. Each session has its own lock, so requests against one
/// session run one at a time while different sessions proceed in parallel.
#[derive(Debug)]
pub struct Sessions {
    entries: Mutex<HashMap<String, Entry>>,
    ttl: Duration,
}

impl Sessions {
    pub fn new(ttl: Duration) -> Self {
        Sessions { entries: Mutex::new(HashMap::new()), ttl }
    }

    pub fn create(&self, graph: QueryGraph) -> String {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let now = Instant::now();
        let session = Session { ontology: None, graph, created_at: now };
        let mut entries = self.entries.lock().expect("session table poisoned");
        self.purge(&mut entries, now);
        entries.insert(id.clone(), Entry { session: Arc::new(Mutex::new(session)), last_used: now });
        id
    }

    /// Looks up a live session and refreshes its idle timer.
    pub fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        let now = Instant::now();
        let mut entries = self.entries.lock().expect("session table poisoned");
        self.purge(&mut entries, now);
        let entry = entries.get_mut(id).ok_or_else(|| ApiError::SessionNotFound(id.to_string()))?;
        entry.last_used = now;
        Ok(entry.session.clone())
    }

    pub fn remove(&self, id: &str) -> Result<(), ApiError> {
        let mut entries = self.entries.lock().expect("session table poisoned");
        entries.remove(id).map(drop).ok_or_else(|| ApiError::SessionNotFound(id.to_string()))
    }

    pub fn len(&self) -> usize {
        let mut entries = self.entries.lock().expect("session table poisoned");
        self.purge(&mut entries, Instant::now());
        entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn purge(&self, entries: &mut HashMap<String, Entry>, now: Instant) {
        entries.retain(|_, e| now.duration_since(e.last_used) < self.ttl);
    }
}
