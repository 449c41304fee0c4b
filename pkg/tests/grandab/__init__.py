# grandab tests
