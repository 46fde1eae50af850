# Logging, decorators, config parsing and provenance helpers
