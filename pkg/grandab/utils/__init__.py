# Utilities initialization
