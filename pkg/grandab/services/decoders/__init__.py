# GRANDAB decoders: serial reference oracle and the cycle-accurate dial engine
