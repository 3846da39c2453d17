//! Per-user usage profiles on disk: `<store_dir>/<user>.profile.json`.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::ids::UserId;
use crate::priority::UsageProfile;
use crate::session::canonical::to_canonical_string;

fn check_user_id(user: &UserId) -> Result<()> {
    let s = user.as_str();
    let bad = s.is_empty() || s == "." || s == ".." || s.contains(['/', '\\', '\0']);
    if bad {
        return Err(Error::InvalidDefinition(format!("user id {s:?} cannot name a profile file")));
    }
    Ok(())
}

pub fn profile_path(store_dir: &Path, user: &UserId) -> PathBuf {
    store_dir.join(format!("{user}.profile.json"))
}

/// Reads a user's profile. A missing file yields a fresh profile; any
/// malformed or inconsistent content is an error, never a silent reset.
pub fn load_profile(store_dir: &Path, user: &UserId) -> Result<UsageProfile> {
    check_user_id(user)?;
    let path = profile_path(store_dir, user);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(UsageProfile::new(user.clone())),
        Err(source) => return Err(Error::Io { path, source }),
    };
    let parse_err = |message: String| Error::ProfileParse { path: path.clone(), message };
    let profile: UsageProfile = serde_json::from_str(&text).map_err(|e| parse_err(e.to_string()))?;
    if &profile.user_id != user {
        return Err(parse_err(format!("file belongs to user {:?}", profile.user_id.as_str())));
    }
    if !profile.is_consistent() {
        return Err(parse_err("counts, last_used and next_seq disagree".into()));
    }
    Ok(profile)
}

/// Writes the canonical form via a temporary file and an atomic rename,
/// creating the directory if needed.
pub fn save_profile(store_dir: &Path, profile: &UsageProfile) -> Result<()> {
    check_user_id(&profile.user_id)?;
    let path = profile_path(store_dir, &profile.user_id);
    let io = |source| Error::Io { path: path.clone(), source };
    fs::create_dir_all(store_dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(store_dir).map_err(io)?;
    let mut bytes = to_canonical_string(profile).into_bytes();
    bytes.push(b'\n');
    tmp.write_all(&bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(&path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Profiles known to a session, loaded lazily from an optional directory.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProfileStore {
    dir: Option<PathBuf>,
    profiles: BTreeMap<UserId, UsageProfile>,
    /// What the directory holds for each resident user, as far as we know.
    on_disk: BTreeMap<UserId, UsageProfile>,
}

impl ProfileStore {
    /// Purely in-memory; unknown users start fresh.
    pub fn in_memory() -> Self {
        ProfileStore::default()
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        ProfileStore { dir: Some(dir.into()), ..ProfileStore::default() }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn insert(&mut self, profile: UsageProfile) {
        self.profiles.insert(profile.user_id.clone(), profile);
    }

    pub fn get(&self, user: &UserId) -> Option<&UsageProfile> {
        self.profiles.get(user)
    }

    pub fn get_mut(&mut self, user: &UserId) -> Option<&mut UsageProfile> {
        self.profiles.get_mut(user)
    }

    pub fn profiles(&self) -> &BTreeMap<UserId, UsageProfile> {
        &self.profiles
    }

    /// Makes sure `user` is resident, reading it from disk on first use.
    pub fn ensure_loaded(&mut self, user: &UserId) -> Result<()> {
        if self.profiles.contains_key(user) {
            return Ok(());
        }
        let profile = match &self.dir {
            Some(dir) => {
                let profile = load_profile(dir, user)?;
                if profile_path(dir, user).exists() {
                    self.on_disk.insert(user.clone(), profile.clone());
                }
                profile
            }
            None => {
                check_user_id(user)?;
                UsageProfile::new(user.clone())
            }
        };
        self.profiles.insert(user.clone(), profile);
        Ok(())
    }

    /// Writes resident profiles that differ from their on-disk copy back to
    /// the directory, if there is one. Returns how many files were written.
    pub fn save_all(&mut self) -> Result<usize> {
        let Some(dir) = &self.dir else { return Ok(0) };
        let mut written = 0;
        for (user, profile) in &self.profiles {
            if self.on_disk.get(user) != Some(profile) {
                save_profile(dir, profile)?;
                self.on_disk.insert(user.clone(), profile.clone());
                written += 1;
            }
        }
        Ok(written)
    }
}
