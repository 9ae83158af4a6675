use std::fmt;
use std::path::Path;
use std::process::ExitCode;

/// Why a command stopped. Each kind has a fixed exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments: exit 2.
    Usage(String),
    /// A result failed its physics check: exit 3.
    Physics(String),
    /// Reading or writing a file failed: exit 4.
    Io(String),
}

impl Failure {
    pub fn io(path: &Path, err: impl fmt::Display) -> Self {
        Failure::Io(format!("{}: {err}", path.display()))
    }

    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Physics(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "invalid arguments: {m}"),
            Failure::Physics(m) => write!(f, "check failed: {m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

/// Library errors raised while running an already validated command.
impl From<ghz_teleport_core::Error> for Failure {
    fn from(e: ghz_teleport_core::Error) -> Self {
        Failure::Physics(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes() {
        assert_eq!(Failure::Usage(String::new()).code(), 2);
        assert_eq!(Failure::Physics(String::new()).code(), 3);
        assert_eq!(Failure::Io(String::new()).code(), 4);
        let e = Failure::from(ghz_teleport_core::Error::NotUnitary);
        assert_eq!(e.code(), 3);
    }
}
