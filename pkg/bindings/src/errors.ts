// Error taxonomy mirroring the primary implementation's exception classes;
// message prefixes match so callers can pattern-match either side.

export class TimetokError extends Error {}

export class DomainError extends TimetokError {}

export class InvalidDateError extends DomainError {}

export class ParseError extends TimetokError {
  constructor(message: string, offset?: number) {
    super(offset === undefined ? message : `${message} (offset ${offset})`);
  }
}

export class TokenError extends TimetokError {
  constructor(message: string, offset?: number) {
    super(offset === undefined ? message : `${message} (token offset ${offset})`);
  }
}

export class SpecFileError extends TimetokError {}

export class VersionMismatchError extends SpecFileError {}

export class ChecksumMismatchError extends SpecFileError {}
