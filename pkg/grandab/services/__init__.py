# Decoding, code construction and simulation services
