# Tests initialization
