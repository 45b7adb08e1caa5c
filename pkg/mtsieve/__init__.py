# mtsieve: parameterized Mersenne Twister minting and sieving
