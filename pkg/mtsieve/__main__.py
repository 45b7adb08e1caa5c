from mtsieve.cli import main

main()
